#include "uft/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace uft {

static_assert(std::endian::native == std::endian::little,
              "tensor I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'U', 'F', 'T', '1'};

std::uint64_t element_count(const std::vector<std::uint32_t>& dims) {
    std::uint64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

}  // namespace

void write_tensor(const std::string& path, const Tensor& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(kMagic, 4);
    std::uint32_t rank = std::uint32_t(t.dims.size());
    out.write(reinterpret_cast<const char*>(&rank), 4);
    out.write(reinterpret_cast<const char*>(t.dims.data()), 4 * rank);
    out.write(reinterpret_cast<const char*>(t.data.data()),
              std::streamsize(4 * t.data.size()));
    if (!out) throw IoError("write failed: " + path);
}

Tensor read_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("bad magic in tensor file: " + path);
    }
    std::uint32_t rank = 0;
    in.read(reinterpret_cast<char*>(&rank), 4);
    if (!in || rank > 8) throw IoError("bad rank in tensor file: " + path);
    Tensor t;
    t.dims.resize(rank);
    in.read(reinterpret_cast<char*>(t.dims.data()), 4 * rank);
    t.data.resize(element_count(t.dims));
    in.read(reinterpret_cast<char*>(t.data.data()),
            std::streamsize(4 * t.data.size()));
    if (!in) throw IoError("truncated tensor file: " + path);
    return t;
}

void write_matrix(const std::string& path, const Matrix& m) {
    Tensor t;
    t.dims = {std::uint32_t(m.rows()), std::uint32_t(m.cols())};
    t.data.resize(size_t(m.size()));
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm =
        m.cast<float>();
    std::memcpy(t.data.data(), rm.data(), 4 * t.data.size());
    write_tensor(path, t);
}

Matrix read_matrix(const std::string& path) {
    Tensor t = read_tensor(path);
    if (t.dims.size() != 2) {
        throw IoError("expected a rank-2 tensor in " + path);
    }
    Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        map(t.data.data(), t.dims[0], t.dims[1]);
    return map.cast<double>();
}

void write_vector(const std::string& path, const Vector& v) {
    Tensor t;
    t.dims = {std::uint32_t(v.size())};
    t.data.resize(size_t(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) t.data[i] = float(v[i]);
    write_tensor(path, t);
}

Vector read_vector(const std::string& path) {
    Tensor t = read_tensor(path);
    if (t.dims.size() != 1) {
        throw IoError("expected a rank-1 tensor in " + path);
    }
    Vector v(t.dims[0]);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = t.data[size_t(i)];
    return v;
}

FeatureSet read_csv_features(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("ragged CSV row in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty CSV file: " + path);
    Matrix m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return FeatureSet{std::move(m)};
}

void write_sidecar(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const auto& [key, value] : kv) out << key << ": " << value << "\n";
}

std::vector<std::pair<std::string, std::string>> read_sidecar(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find(": ");
        if (pos == std::string::npos) continue;
        kv.emplace_back(line.substr(0, pos), line.substr(pos + 2));
    }
    return kv;
}

void write_pyramid(const std::string& manifest_path,
                   const FeaturePyramid& pyramid) {
    std::filesystem::path base(manifest_path);
    std::ofstream out(manifest_path);
    if (!out) throw IoError("cannot open for writing: " + manifest_path);
    out << "base_h: " << pyramid.base_h << "\n";
    out << "base_w: " << pyramid.base_w << "\n";
    out << "levels: " << pyramid.levels.size() << "\n";
    for (size_t k = 0; k < pyramid.levels.size(); ++k) {
        const FeatureMap& lvl = pyramid.levels[k];
        std::filesystem::path level_path = base;
        level_path.replace_extension(".level" + std::to_string(k) + ".uft");
        out << "level" << k << ": " << level_path.filename().string() << " "
            << lvl.h << " " << lvl.w << " " << lvl.data.cols() << "\n";
        write_matrix(level_path.string(), lvl.data);
    }
}

FeaturePyramid read_pyramid(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open: " + manifest_path);
    std::filesystem::path dir =
        std::filesystem::path(manifest_path).parent_path();
    FeaturePyramid pyramid;
    size_t levels = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "base_h:") ss >> pyramid.base_h;
        else if (key == "base_w:") ss >> pyramid.base_w;
        else if (key == "levels:") ss >> levels;
        else if (key.rfind("level", 0) == 0) {
            std::string file;
            int h, w, d;
            ss >> file >> h >> w >> d;
            Matrix data = read_matrix((dir / file).string());
            if (data.rows() != Eigen::Index(h) * w || data.cols() != d) {
                throw IoError("pyramid level shape mismatch in manifest");
            }
            pyramid.levels.push_back(FeatureMap{std::move(data), h, w});
        }
    }
    if (pyramid.levels.size() != levels) {
        throw IoError("pyramid manifest level count mismatch");
    }
    return pyramid;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace uft
