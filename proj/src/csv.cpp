#include "gramcov/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gramcov {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& K) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    for (Index i = 0; i < K.rows(); ++i) {
        for (Index j = 0; j < K.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(K(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        const char* ptr = line.data();
        const char* end = line.data() + line.size();
        while (ptr < end) {
            double value = 0.0;
            const auto res = std::from_chars(ptr, end, value);
            if (res.ec != std::errc{}) {
                throw ParseError("row " + std::to_string(line_no) + ": bad number in " +
                                 path.string());
            }
            row.push_back(value);
            ptr = res.ptr;
            if (ptr < end) {
                if (*ptr != ',') {
                    throw ParseError("row " + std::to_string(line_no) +
                                     ": expected comma in " + path.string());
                }
                ++ptr;
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("row " + std::to_string(line_no) + ": ragged row in " +
                             path.string());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty matrix file " + path.string());
    Matrix K(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            K(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return K;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) os << ',';
        os << cells[i];
    }
    return os.str();
}

}  // namespace gramcov
