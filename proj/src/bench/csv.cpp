#include <cstdio>

#include "qns/bench.hpp"
#include "qns/error.hpp"

namespace qns {

CsvWriter::CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header)
    : out_(path), columns_(header.size()) {
    if (!out_) {
        throw ConfigError("csv: cannot write " + path.string());
    }
    for (const auto &h : header) {
        *this << h;
    }
    end_row();
}

void CsvWriter::separator() {
    if (in_row_ > 0) {
        out_ << ',';
    }
    ++in_row_;
}

CsvWriter &CsvWriter::operator<<(double x) {
    separator();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    out_ << buf;
    return *this;
}

CsvWriter &CsvWriter::operator<<(long long x) {
    separator();
    out_ << x;
    return *this;
}

CsvWriter &CsvWriter::operator<<(const std::string &s) {
    separator();
    out_ << s;
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_) {
        throw ContractViolation("csv: row has " + std::to_string(in_row_) + " cells, header has " +
                                std::to_string(columns_));
    }
    out_ << '\n';
    in_row_ = 0;
}

void write_field_csv(const std::filesystem::path &path, const FlowField &field) {
    const Grid2D &g = *field.grid;
    CsvWriter w(path, {"i", "j", "x", "y", "u", "v", "p"});
    for (int j = 0; j <= g.n_eta() + 1; ++j) {
        for (int i = 0; i <= g.n_xi() + 1; ++i) {
            const auto k = g.node(i, j);
            w << i << j << g.xi.coord[i] << g.eta.coord[j] << field.u[k] << field.v[k] << field.p[k];
            w.end_row();
        }
    }
}

void write_profile_csv(const std::filesystem::path &path, const Profile &profile, const std::string &coord_name,
                       const std::string &value_name) {
    CsvWriter w(path, {coord_name, value_name});
    for (std::size_t k = 0; k < profile.coord.size(); ++k) {
        w << profile.coord[k] << profile.value[k];
        w.end_row();
    }
}

} // namespace qns
