#include "cisim/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <json.hpp>
#include <openssl/evp.h>

namespace cisim {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

double parse_double(const std::string& s, const std::string& path) {
    double v = 0.0;
    const std::string t = boost::algorithm::trim_copy(s);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) fail(ErrorCode::IoError, path + ": bad number '" + s + "'");
    return v;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Table read_csv(const std::string& path) {
    std::istringstream in(read_text(path));
    Table t;
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::IoError, path + ": empty file");
    boost::algorithm::split(t.header, line, boost::algorithm::is_any_of(","));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        boost::algorithm::split(cells, line, boost::algorithm::is_any_of(","));
        if (cells.size() != t.header.size()) fail(ErrorCode::IoError, path + ": ragged row");
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_double(c, path));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void expect_header(const Table& t, const std::vector<std::string>& want, const std::string& path) {
    if (t.header != want) fail(ErrorCode::IoError, path + ": unexpected header");
}

void write_indexed(const std::string& path, const Eigen::MatrixXd& values, const auto& coord) {
    auto out = open_out(path);
    out << "x_index,y_index,x,y,value\n";
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            const auto [x, y] = coord(i, j);
            out << i << ',' << j << ',' << format_number(x) << ',' << format_number(y) << ','
                << format_number(values(i, j)) << '\n';
        }
    finish(out, path);
}

Eigen::MatrixXd read_indexed(const std::string& path, int n) {
    const Table t = read_csv(path);
    expect_header(t, {"x_index", "y_index", "x", "y", "value"}, path);
    if (static_cast<int>(t.rows.size()) != n * n) fail(ErrorCode::IoError, path + ": wrong row count");
    Eigen::MatrixXd m(n, n);
    for (const auto& r : t.rows) m(static_cast<int>(r[0]), static_cast<int>(r[1])) = r[4];
    return m;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out << text;
    finish(out, path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_grid_csv(const std::string& path, const SpatialGrid& grid) {
    const Eigen::VectorXd axis = grid.spec.axis();
    write_indexed(path, grid.values, [&](Eigen::Index i, Eigen::Index j) { return std::pair{axis[i], axis[j]}; });
}

SpatialGrid read_grid_csv(const std::string& path) {
    const Table t = read_csv(path);
    expect_header(t, {"x_index", "y_index", "x", "y", "value"}, path);
    const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(t.rows.size()))));
    if (n < 2 || n * n != static_cast<int>(t.rows.size())) fail(ErrorCode::IoError, path + ": grid is not square");
    SpatialGridSpec spec;
    spec.resolution = n;
    spec.half_width = -t.rows.front()[2];
    return {spec, read_indexed(path, n), std::nullopt};
}

void write_grid_sidecar(const std::string& path, const SpatialGrid& grid) {
    write_json(path, json{{"half_width", grid.spec.half_width},
                          {"resolution", grid.spec.resolution},
                          {"rotation", grid.spec.rotation},
                          {"integral", grid.integral()},
                          {"negative_mass", grid.negative_mass()}});
}

void write_samples_csv(const std::string& path, const FourierSamples& samples, SamplePart part) {
    const Eigen::MatrixXd& m = part == SamplePart::cos_part ? samples.cos_part : samples.sin_part;
    write_indexed(path, m, [&](Eigen::Index i, Eigen::Index j) {
        const auto k = samples.grid.at(static_cast<int>(i), static_cast<int>(j));
        return std::pair{k[0], k[1]};
    });
}

void write_samples_sidecar(const std::string& path, const FourierSamples& samples) {
    write_json(path, json{{"k_max", samples.grid.k_max},
                          {"points", samples.grid.points},
                          {"rotation", samples.grid.rotation},
                          {"shots", samples.shots},
                          {"noisy", samples.noisy},
                          {"seed", samples.seed}});
}

FourierSamples read_samples(const std::string& cos_csv, const std::string& sin_csv, const std::string& sidecar_json) {
    json meta;
    try {
        meta = json::parse(read_text(sidecar_json));
    } catch (const json::exception& e) {
        fail(ErrorCode::IoError, sidecar_json + ": " + e.what());
    }
    FourierSamples s;
    try {
        s.grid = {meta.at("k_max").get<double>(), meta.at("points").get<int>(), meta.at("rotation").get<double>()};
        s.shots = meta.at("shots").get<int>();
        s.noisy = meta.at("noisy").get<bool>();
        s.seed = meta.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        fail(ErrorCode::IoError, sidecar_json + ": " + e.what());
    }
    s.cos_part = read_indexed(cos_csv, s.grid.points);
    s.sin_part = read_indexed(sin_csv, s.grid.points);
    const int n = s.grid.points;
    s.cos_var = Eigen::MatrixXd::Zero(n, n);
    s.sin_var = Eigen::MatrixXd::Zero(n, n);
    if (s.shots > 0) {
        s.cos_var = (1.0 - s.cos_part.array().square()).max(0.0) / s.shots;
        s.sin_var = (1.0 - s.sin_part.array().square()).max(0.0) / s.shots;
    }
    return s;
}

void write_ratio_curve_csv(const std::string& path, const RatioCurve& curve) {
    write_table_csv(path, {"theta", "ratio", "sigma"}, {curve.theta, curve.ratio, curve.sigma});
}

RatioCurve read_ratio_curve_csv(const std::string& path) {
    const Table t = read_csv(path);
    expect_header(t, {"theta", "ratio", "sigma"}, path);
    RatioCurve c;
    for (const auto& r : t.rows) {
        c.theta.push_back(r[0]);
        c.ratio.push_back(r[1]);
        c.sigma.push_back(r[2]);
    }
    return c;
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
    require(header.size() == columns.size(), ErrorCode::InvalidArgument, "table header and columns differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) require(c.size() == rows, ErrorCode::InvalidArgument, "table columns differ in length");
    auto out = open_out(path);
    out << boost::algorithm::join(header, ",") << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_number(columns[c][r]);
        out << '\n';
    }
    finish(out, path);
}

PgmScale write_pgm(const std::string& path, const Eigen::MatrixXd& values) {
    PgmScale scale{values.minCoeff(), values.maxCoeff()};
    const double span = scale.max - scale.min;
    auto out = open_out(path, std::ios::out | std::ios::binary);
    // Image columns follow x, rows follow y from top (max) to bottom.
    out << "P5\n" << values.rows() << ' ' << values.cols() << "\n255\n";
    for (Eigen::Index j = values.cols() - 1; j >= 0; --j)
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            const double u = span > 0.0 ? (values(i, j) - scale.min) / span : 0.0;
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * u))));
        }
    finish(out, path);
    return scale;
}

std::string sha256_file(const std::string& path) {
    const std::string bytes = read_text(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorCode::IoError, "sha256 failed for " + path);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[md[i] >> 4];
        hex += kHex[md[i] & 0xf];
    }
    return hex;
}

}  // namespace cisim
