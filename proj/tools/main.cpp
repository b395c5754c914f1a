#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "gramcov/csv.hpp"
#include "gramcov/diagnostics.hpp"
#include "gramcov/generators.hpp"
#include "gramcov/gradients.hpp"
#include "gramcov/trainer.hpp"
#include "gramcov/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace gramcov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

fs::path output_root() {
    if (const char* root = std::getenv("GRAMCOV_OUTPUT_ROOT")) return fs::path(root);
    return fs::current_path();
}

fs::path resolve_output(const std::string& path) {
    fs::path p(path);
    return p.is_absolute() ? p : output_root() / p;
}

void write_reports_csv(const fs::path& path, const std::vector<VerificationReport>& reports) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string());
    out << "check,M,N,generator,seed,residual,tolerance,pass,detail\n";
    for (const auto& r : reports) {
        out << csv_line({r.check, std::to_string(r.rows), std::to_string(r.cols), r.generator,
                         std::to_string(r.seed), format_double(r.residual),
                         format_double(r.tolerance), r.pass ? "1" : "0", r.detail})
            << '\n';
    }
}

// ---------------------------------------------------------------- verify ---

int cmd_verify(std::uint64_t seed, int trials, Index sphere_pairs, const std::string& out_file,
               bool inject_bad_input) {
    std::vector<VerificationReport> reports;
    const auto run_sized = [&](const std::string& generator, std::uint64_t instance,
                               auto&& make_matrix, auto&& check) {
        Rng rng(derive_seed(seed, instance));
        const Index m = 2 + static_cast<Index>(rng.below(127));
        const Index n = 2 + static_cast<Index>(rng.below(127));
        VerificationReport r = check(make_matrix(m, n, rng));
        r.generator = generator;
        r.seed = instance;
        reports.push_back(std::move(r));
    };

    std::uint64_t instance = 0;
    // algebraic identity over mixed generators
    for (int t = 0; t < trials; ++t) {
        const int kind = t % 4;
        if (kind == 0) {
            run_sized("gaussian", instance++, gen_gaussian, verify_identity);
        } else if (kind == 1) {
            run_sized("uniform", instance++, gen_uniform, verify_identity);
        } else if (kind == 2) {
            run_sized(
                "sparse", instance++,
                [](Index m, Index n, Rng& rng) { return gen_sparse(m, n, 0.2, rng); },
                verify_identity);
        } else {
            run_sized(
                "rank-deficient", instance++,
                [](Index m, Index n, Rng& rng) {
                    const Index rank = 1 + static_cast<Index>(rng.below(
                                               static_cast<std::uint64_t>(std::min(m, n))));
                    return gen_rank_deficient(m, n, rank, rng);
                },
                verify_identity);
        }
    }

    // doubly-normalized equivalence on square sign / orthogonal matrices
    const int doubly = std::max(20, trials / 2);
    for (int t = 0; t < doubly; ++t) {
        Rng rng(derive_seed(seed, instance));
        const Index n = 2 + static_cast<Index>(rng.below(63));
        const bool orthogonal = t % 2 == 1;
        VerificationReport r = verify_doubly_normalized(
            orthogonal ? gen_orthogonal(n, rng) : gen_sign_scaled(n, rng));
        r.generator = orthogonal ? "orthogonal" : "sign";
        r.seed = instance++;
        reports.push_back(std::move(r));
    }

    // norm and criterion bounds on normalized random matrices
    for (int t = 0; t < trials; ++t) {
        run_sized("column-normalized", instance++, gen_column_normalized,
                  [](const Matrix& K) { return verify_norm_bounds(K, NormMode::ColumnsNormalized); });
        run_sized("row-normalized", instance++, gen_row_normalized,
                  [](const Matrix& K) { return verify_norm_bounds(K, NormMode::RowsNormalized); });
        run_sized("column-normalized", instance++, gen_column_normalized, [](const Matrix& K) {
            return verify_corollary_bounds(K, NormMode::ColumnsNormalized);
        });
        run_sized("row-normalized", instance++, gen_row_normalized, [](const Matrix& K) {
            return verify_corollary_bounds(K, NormMode::RowsNormalized);
        });
    }
    // bound-attaining extremes
    {
        VerificationReport r =
            verify_norm_bounds(gen_constant_columns_normalized(8, 24), NormMode::ColumnsNormalized);
        r.generator = "constant";
        reports.push_back(r);
        r = verify_norm_bounds(gen_one_hot_rows(8, 24), NormMode::ColumnsNormalized);
        r.generator = "one-hot";
        reports.push_back(r);
        r = verify_norm_bounds(gen_constant_rows_normalized(24, 8), NormMode::RowsNormalized);
        r.generator = "constant";
        reports.push_back(r);
        r = verify_norm_bounds(gen_one_hot_cols(24, 8), NormMode::RowsNormalized);
        r.generator = "one-hot";
        reports.push_back(r);
    }

    if (inject_bad_input) {
        // deliberately unnormalized input: the precondition error is surfaced
        // as a failing report rather than a crash
        Rng rng(derive_seed(seed, instance));
        VerificationReport bad;
        bad.check = "norm-bounds-columns-normalized";
        bad.generator = "unnormalized(injected)";
        bad.seed = instance++;
        try {
            bad = verify_norm_bounds(gen_gaussian(6, 9, rng), NormMode::ColumnsNormalized);
        } catch (const Error& e) {
            bad.pass = false;
            bad.detail = e.what();
        }
        reports.push_back(std::move(bad));
    }

    // dot-product distribution on the hypersphere
    for (Index m : {2, 3, 16, 128}) {
        for (auto& r : verify_sphere_stats(m, sphere_pairs, derive_seed(seed, instance))) {
            r.seed = instance;
            reports.push_back(std::move(r));
        }
        ++instance;
    }

    const fs::path out_path = resolve_output(out_file);
    write_reports_csv(out_path, reports);

    int failures = 0;
    for (const auto& r : reports) {
        if (!r.pass) {
            ++failures;
            std::cout << "FAIL " << r.check << " generator=" << r.generator
                      << " residual=" << r.residual << " tol=" << r.tolerance << "\n";
        }
    }
    std::cout << reports.size() - failures << "/" << reports.size() << " checks passed; report: "
              << out_path.string() << "\n";
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------- gradcheck ---

int cmd_gradcheck(std::uint64_t seed, int n_seeds, double tol, double h,
                  const std::string& loss_filter, const std::string& out_file) {
    std::vector<std::string> ids;
    if (loss_filter.empty()) {
        ids = loss_ids();
    } else {
        loss_info(loss_filter);  // throws UnknownLoss -> usage error
        ids.push_back(loss_filter);
    }

    const fs::path out_path = resolve_output(out_file);
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open " + out_path.string());
    out << "loss_id,seed,tau,max_rel_err,max_abs_err,pass\n";

    int failures = 0;
    for (const auto& id : ids) {
        const bool uses_tau = loss_info(id).uses_tau;
        const std::vector<double> taus =
            uses_tau ? std::vector<double>{0.05, 0.15, 1.0} : std::vector<double>{0.15};
        for (int s = 0; s < n_seeds; ++s) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
            const Matrix K = gen_gaussian(6, 9, rng);
            const Matrix Kp = gen_gaussian(6, 9, rng);
            for (double tau : taus) {
                LossParams params;
                params.weights = {1.0, 1.0, 1.0};
                params.tau = tau;
                const GradCheckReport r = grad_check(id, K, Kp, params, tol, h);
                if (!r.pass) ++failures;
                out << csv_line({id, std::to_string(s), uses_tau ? format_double(tau) : "",
                                 format_double(r.max_rel_err), format_double(r.max_abs_err),
                                 r.pass ? "1" : "0"})
                    << '\n';
            }
        }
    }
    std::cout << (failures == 0 ? "all gradients verified" : "gradient failures found")
              << "; report: " << out_path.string() << "\n";
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

// ----------------------------------------------------------------- train ---

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
    throw ParseError("train config: field '" + field + "' " + why);
}

template <typename T>
T get_field(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        config_error(key, "has the wrong type");
    }
}

void check_known_keys(const json& j, const std::vector<std::string>& known,
                      const std::string& scope) {
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            config_error(scope.empty() ? item.key() : scope + "." + item.key(),
                         "is not a recognized setting");
        }
    }
}

TrainConfig parse_train_config(const json& j, const std::string& loss_id, Index embedding_dim,
                               const std::string& projector_shape) {
    TrainConfig config = default_config(loss_id, embedding_dim);
    if (!projector_shape.empty()) {
        config.model.projector_widths = projector_from_shape(
            projector_shape, config.model.representation_dim(), embedding_dim);
    }

    if (j.contains("weights")) {
        const json& w = j.at("weights");
        check_known_keys(w, {"invariance", "variance", "covariance"}, "weights");
        config.params.weights.invariance =
            get_field(w, "invariance", config.params.weights.invariance);
        config.params.weights.variance = get_field(w, "variance", config.params.weights.variance);
        config.params.weights.covariance =
            get_field(w, "covariance", config.params.weights.covariance);
    }
    config.params.tau = get_field(j, "tau", config.params.tau);
    config.params.lambda_bt = get_field(j, "lambda_bt", config.params.lambda_bt);
    config.params.alpha = get_field(j, "alpha", config.params.alpha);
    config.params.two_branch_negatives =
        get_field(j, "two_branch_negatives", config.params.two_branch_negatives);
    if (j.contains("normalization")) {
        config.normalization = scheme_from_string(j.at("normalization").get<std::string>());
    }
    config.batch_size = get_field<Index>(j, "batch_size", config.batch_size);
    config.epochs = get_field(j, "epochs", config.epochs);
    config.base_lr = get_field(j, "base_lr", config.base_lr);
    config.warmup_epochs = get_field(j, "warmup_epochs", config.warmup_epochs);
    config.weight_decay = get_field(j, "weight_decay", config.weight_decay);
    config.momentum = get_field(j, "momentum", config.momentum);
    config.seed = get_field<std::uint64_t>(j, "seed", config.seed);
    config.online_probe = get_field(j, "online_probe", config.online_probe);
    config.probe_lr = get_field(j, "probe_lr", config.probe_lr);
    config.export_count = get_field<Index>(j, "export_count", config.export_count);

    if (j.contains("dataset")) {
        const json& d = j.at("dataset");
        check_known_keys(d,
                         {"n_samples", "input_dim", "n_classes", "class_radius", "sigma_class",
                          "holdout_fraction", "seed"},
                         "dataset");
        config.dataset.n_samples = get_field<Index>(d, "n_samples", config.dataset.n_samples);
        config.dataset.input_dim = get_field<Index>(d, "input_dim", config.dataset.input_dim);
        config.dataset.n_classes = get_field<Index>(d, "n_classes", config.dataset.n_classes);
        config.dataset.class_radius = get_field(d, "class_radius", config.dataset.class_radius);
        config.dataset.sigma_class = get_field(d, "sigma_class", config.dataset.sigma_class);
        config.dataset.holdout_fraction =
            get_field(d, "holdout_fraction", config.dataset.holdout_fraction);
        config.dataset.seed = get_field<std::uint64_t>(d, "seed", config.dataset.seed);
    }
    if (j.contains("augment")) {
        const json& a = j.at("augment");
        check_known_keys(a, {"sigma_noise", "scale_lo", "scale_hi", "dropout_p"}, "augment");
        config.augment.sigma_noise = get_field(a, "sigma_noise", config.augment.sigma_noise);
        config.augment.scale_lo = get_field(a, "scale_lo", config.augment.scale_lo);
        config.augment.scale_hi = get_field(a, "scale_hi", config.augment.scale_hi);
        config.augment.dropout_p = get_field(a, "dropout_p", config.augment.dropout_p);
    }
    if (j.contains("model")) {
        const json& m = j.at("model");
        check_known_keys(m, {"encoder", "projector", "batchnorm"}, "model");
        if (m.contains("encoder")) {
            config.model.encoder_widths = m.at("encoder").get<std::vector<Index>>();
        }
        if (m.contains("projector")) {
            config.model.projector_widths = m.at("projector").get<std::vector<Index>>();
        }
        config.model.batchnorm = get_field(m, "batchnorm", config.model.batchnorm);
    }
    config.validate();
    return config;
}

json manifest_json(const TrainConfig& config, const TrainRun& run, double offline_accuracy,
                   bool have_offline) {
    json m;
    m["loss"] = config.loss_id;
    m["weights"] = {{"invariance", config.params.weights.invariance},
                    {"variance", config.params.weights.variance},
                    {"covariance", config.params.weights.covariance}};
    m["tau"] = config.params.tau;
    m["lambda_bt"] = config.params.lambda_bt;
    m["alpha"] = config.params.alpha;
    m["two_branch_negatives"] = config.params.two_branch_negatives;
    m["normalization"] = config.resolved_scheme_name();
    m["batch_size"] = config.batch_size;
    m["epochs"] = config.epochs;
    m["base_lr"] = config.base_lr;
    m["effective_lr"] = config.effective_lr();
    m["warmup_epochs"] = config.warmup_epochs;
    m["weight_decay"] = config.weight_decay;
    m["momentum"] = config.momentum;
    m["seed"] = config.seed;
    m["probe_lr"] = config.probe_lr;
    m["export_count"] = config.export_count;
    m["dataset"] = {{"n_samples", config.dataset.n_samples},
                    {"input_dim", config.dataset.input_dim},
                    {"n_classes", config.dataset.n_classes},
                    {"class_radius", config.dataset.class_radius},
                    {"sigma_class", config.dataset.sigma_class},
                    {"holdout_fraction", config.dataset.holdout_fraction},
                    {"seed", config.dataset.seed}};
    m["augment"] = {{"sigma_noise", config.augment.sigma_noise},
                    {"scale_lo", config.augment.scale_lo},
                    {"scale_hi", config.augment.scale_hi},
                    {"dropout_p", config.augment.dropout_p}};
    m["model"] = {{"encoder", config.model.encoder_widths},
                  {"projector", config.model.projector_widths},
                  {"batchnorm", config.model.batchnorm}};
    m["final_online_accuracy"] = run.final_online_accuracy;
    if (have_offline) m["offline_accuracy"] = offline_accuracy;
    return m;
}

void write_metrics_csv(const fs::path& path, const TrainRun& run) {
    std::ofstream out(path);
    out << "epoch,loss,invariance,variance,covariance,online_accuracy\n";
    for (const auto& e : run.history) {
        out << csv_line({std::to_string(e.epoch), format_double(e.loss),
                         format_double(e.invariance), format_double(e.variance),
                         format_double(e.covariance), format_double(e.online_accuracy)})
            << '\n';
    }
}

int cmd_train(const std::string& config_file, const std::string& out_dir) {
    std::ifstream in(config_file);
    if (!in) throw ParseError("cannot open config file " + config_file);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("config parse error in " + config_file + ": " + e.what());
    }

    std::vector<std::string> losses;
    std::vector<Index> dims;
    std::vector<std::string> projectors;
    std::vector<std::uint64_t> seeds;
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_known_keys(s, {"losses", "embedding_dims", "projectors", "seeds"}, "sweep");
        losses = get_field(s, "losses", std::vector<std::string>{});
        dims = get_field(s, "embedding_dims", std::vector<Index>{});
        projectors = get_field(s, "projectors", std::vector<std::string>{});
        seeds = get_field(s, "seeds", std::vector<std::uint64_t>{});
    }
    if (losses.empty()) {
        if (!j.contains("loss")) config_error("loss", "is required");
        losses.push_back(j.at("loss").get<std::string>());
    }
    if (dims.empty()) dims.push_back(get_field<Index>(j, "embedding_dim", 16));
    if (projectors.empty()) projectors.push_back("");
    if (seeds.empty()) seeds.push_back(get_field<std::uint64_t>(j, "seed", 1));
    const bool run_offline = get_field(j, "offline_probe", true);

    const fs::path root = resolve_output(out_dir);
    fs::create_directories(root);

    for (const auto& loss : losses) {
        for (Index dim : dims) {
            for (const auto& proj : projectors) {
                for (std::uint64_t seed : seeds) {
                    TrainConfig config = parse_train_config(j, loss, dim, proj);
                    config.seed = seed;
                    std::string name = loss + "_M" + std::to_string(dim);
                    if (!proj.empty()) name += "_" + proj;
                    name += "_seed" + std::to_string(seed);
                    const fs::path dir = root / name;
                    fs::create_directories(dir);

                    const SyntheticDataset data = generate_dataset(config.dataset);
                    const TrainRun run = train(config, data);
                    double offline = 0.0;
                    if (run_offline) offline = offline_probe(run.model, data);

                    const ExportedEmbeddings exported = export_embeddings(
                        run.model, data, config.resolved_strategy(), config.export_count);
                    write_matrix_csv(dir / "embeddings.csv", exported.embeddings);
                    write_matrix_csv(dir / "representations.csv", exported.representations);
                    write_metrics_csv(dir / "metrics.csv", run);
                    std::ofstream mf(dir / "manifest.json");
                    mf << manifest_json(config, run, offline, run_offline).dump(2) << "\n";

                    std::cout << name << ": online=" << run.final_online_accuracy;
                    if (run_offline) std::cout << " offline=" << offline;
                    std::cout << "\n";
                }
            }
        }
    }
    return kExitOk;
}

// -------------------------------------------------------------- diagnose ---

int cmd_diagnose(const std::string& input, const std::string& spectrum_file,
                 const std::string& hist_file, int bins, const std::string& panel_prefix,
                 Index panel_size, const std::string& norms_mode, double rank_threshold) {
    const Matrix K = read_matrix_csv(input);
    std::cout << "loaded " << K.rows() << "x" << K.cols() << " matrix\n";

    if (!spectrum_file.empty()) {
        const auto sigma = singular_spectrum(K);
        const fs::path path = resolve_output(spectrum_file);
        std::ofstream out(path);
        out << "index,sigma\n";
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            out << i << ',' << format_double(sigma[i]) << '\n';
        }
        std::cout << "spectrum: " << sigma.size() << " values, effective rank ("
                  << rank_threshold << ") = " << effective_rank(K, rank_threshold) << " -> "
                  << path.string() << "\n";
    }
    if (!hist_file.empty()) {
        const Histogram h = cosine_similarity_histogram(K, static_cast<std::size_t>(bins));
        const fs::path path = resolve_output(hist_file);
        std::ofstream out(path);
        out << "bin_lo,bin_hi,count\n";
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ','
                << h.counts[b] << '\n';
        }
        std::cout << "similarities: mean=" << h.mean << " std=" << h.stddev << " -> "
                  << path.string() << "\n";
    }
    if (!panel_prefix.empty()) {
        const MatrixPanel p = matrix_panel(K, panel_size);
        const fs::path gram_path = resolve_output(panel_prefix + ".gram.csv");
        const fs::path cov_path = resolve_output(panel_prefix + ".cov.csv");
        write_matrix_csv(gram_path, p.gram_head);
        write_matrix_csv(cov_path, p.covariance_head);
        std::cout << "panel: gram ratio=" << p.gram_ratio
                  << " covariance ratio=" << p.covariance_ratio << " -> " << gram_path.string()
                  << ", " << cov_path.string() << "\n";
    }
    if (!norms_mode.empty()) {
        NormMode mode;
        if (norms_mode == "columns") {
            mode = NormMode::ColumnsNormalized;
        } else if (norms_mode == "rows") {
            mode = NormMode::RowsNormalized;
        } else {
            throw ParseError("--norms expects 'columns' or 'rows'");
        }
        const Matrix normalized = mode == NormMode::ColumnsNormalized
                                      ? l2_normalize_embeddings(K)
                                      : l2_normalize_embeddings(K.transpose()).transpose();
        const NormInterplayRow row = norm_interplay_report(normalized, mode);
        std::cout << "norm interplay (" << norms_mode << "): lower=" << format_double(row.lower)
                  << " measured=" << format_double(row.measured)
                  << " upper=" << format_double(row.upper) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"criteria, duality checks and desk-scale training for joint-embedding methods"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run the algebraic and distributional checks");
    std::uint64_t verify_seed = 1;
    int verify_trials = 200;
    Index verify_pairs = 20000;
    std::string verify_out = "verify_reports.csv";
    bool inject_bad = false;
    verify->add_option("--seed", verify_seed, "master seed for the generator sweep");
    verify->add_option("--trials", verify_trials, "instances per check family")
        ->check(CLI::PositiveNumber);
    verify->add_option("--pairs", verify_pairs, "sphere pairs per dimension")
        ->check(CLI::PositiveNumber);
    verify->add_option("--out", verify_out, "report CSV path");
    verify->add_flag("--inject-bad-input", inject_bad,
                     "feed an unnormalized matrix into a bounds check (self-test)");

    auto* gradcheck = app.add_subcommand("gradcheck", "analytic vs central-difference gradients");
    std::uint64_t grad_seed = 1;
    int grad_seeds = 10;
    double grad_tol = 1e-5;
    double grad_h = 1e-6;
    std::string grad_loss;
    std::string grad_out = "gradcheck.csv";
    gradcheck->add_option("--seed", grad_seed, "master seed");
    gradcheck->add_option("--seeds", grad_seeds, "number of random instances per loss")
        ->check(CLI::PositiveNumber);
    gradcheck->add_option("--tol", grad_tol, "max relative error tolerance");
    gradcheck->add_option("--step", grad_h, "central difference step");
    gradcheck->add_option("--loss", grad_loss, "restrict to one loss id");
    gradcheck->add_option("--out", grad_out, "report CSV path");

    auto* train_cmd = app.add_subcommand("train", "desk-scale joint-embedding training");
    std::string config_file;
    std::string train_out = "runs";
    train_cmd->add_option("--config", config_file, "JSON config file")->required();
    train_cmd->add_option("--out-dir", train_out, "directory for run outputs");

    auto* diagnose = app.add_subcommand("diagnose", "post-hoc analysis of an embeddings CSV");
    std::string diag_input, diag_spectrum, diag_hist, diag_panel, diag_norms;
    int diag_bins = 64;
    Index diag_panel_size = 8;
    double diag_threshold = 0.01;
    diagnose->add_option("--input", diag_input, "embeddings CSV (rows = dimensions)")
        ->required();
    diagnose->add_option("--spectrum", diag_spectrum, "write singular values CSV here");
    diagnose->add_option("--hist", diag_hist, "write cosine-similarity histogram CSV here");
    diagnose->add_option("--bins", diag_bins, "histogram bins")->check(CLI::PositiveNumber);
    diagnose->add_option("--panel", diag_panel, "prefix for Gram/covariance head CSVs");
    diagnose->add_option("--panel-size", diag_panel_size, "panel block size")
        ->check(CLI::PositiveNumber);
    diagnose->add_option("--norms", diag_norms, "norm interplay row: 'columns' or 'rows'");
    diagnose->add_option("--rank-threshold", diag_threshold,
                         "effective rank threshold in (0, 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (verify->parsed()) {
            return cmd_verify(verify_seed, verify_trials, verify_pairs, verify_out, inject_bad);
        }
        if (gradcheck->parsed()) {
            return cmd_gradcheck(grad_seed, grad_seeds, grad_tol, grad_h, grad_loss, grad_out);
        }
        if (train_cmd->parsed()) return cmd_train(config_file, train_out);
        if (diagnose->parsed()) {
            return cmd_diagnose(diag_input, diag_spectrum, diag_hist, diag_bins, diag_panel,
                                diag_panel_size, diag_norms, diag_threshold);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnknownLoss& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
