#include "spikecs/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace spikecs {

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m(i, j));
            if (j) out.put(',');
            out.write(buf, ptr - buf);
        }
        out.put('\n');
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p < end) {
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{})
                throw std::runtime_error("unparsable value at " + path.string() + ":" +
                                         std::to_string(line_number));
            row.push_back(v);
            p = next;
            if (p < end) {
                if (*p != ',')
                    throw std::runtime_error("expected ',' at " + path.string() + ":" +
                                             std::to_string(line_number));
                ++p;
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged csv matrix at " + path.string() + ":" +
                                     std::to_string(line_number));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty csv matrix: " + path.string());
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

}  // namespace spikecs
