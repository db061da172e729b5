#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "uft/io.hpp"
#include "uft/synth.hpp"

using namespace uft;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path(std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR")
                                                 : "/tmp") +
               "/uft_io_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("tensors round-trip through the binary format") {
    TempFile f("tensor.uft");
    Tensor t;
    t.dims = {2, 3};
    t.data = {1.0f, 2.5f, -3.0f, 0.0f, 1e-6f, 4.0f};
    write_tensor(f.path, t);
    Tensor back = read_tensor(f.path);
    CHECK(back.dims == t.dims);
    CHECK(back.data == t.data);
}

TEST_CASE("the header is the documented byte sequence") {
    TempFile f("header.uft");
    Tensor t;
    t.dims = {1, 2};
    t.data = {1.0f, 2.0f};
    write_tensor(f.path, t);
    std::ifstream in(f.path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "UFT1");
    unsigned char rank[4];
    in.read(reinterpret_cast<char*>(rank), 4);
    CHECK(rank[0] == 2);  // little-endian u32 rank
    CHECK(rank[1] == 0);
}

TEST_CASE("corrupted magic bytes are rejected") {
    TempFile f("bad.uft");
    std::ofstream out(f.path, std::ios::binary);
    out << "NOPE then some trailing bytes";
    out.close();
    CHECK_THROWS_AS(read_tensor(f.path), IoError);
    CHECK_THROWS_AS(read_tensor("/nonexistent/definitely_missing.uft"), IoError);
}

TEST_CASE("matrices and vectors round-trip at float precision") {
    TempFile fm("matrix.uft"), fv("vector.uft");
    SplitMix64 rng(5);
    Matrix m(3, 4);
    for (int i = 0; i < m.size(); ++i) m.data()[i] = rng.next_symmetric();
    write_matrix(fm.path, m);
    Matrix mb = read_matrix(fm.path);
    CHECK(mb.rows() == 3);
    CHECK(mb.cols() == 4);
    CHECK((mb - m).cwiseAbs().maxCoeff() < 1e-7);  // f32 storage

    Vector v = Vector::LinSpaced(5, -1.0, 1.0);
    write_vector(fv.path, v);
    Vector vb = read_vector(fv.path);
    CHECK((vb - v).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("a vector file does not parse as a matrix") {
    TempFile f("rank.uft");
    write_vector(f.path, Vector::Ones(4));
    CHECK_THROWS_AS(read_matrix(f.path), IoError);
}

TEST_CASE("csv features parse one row per line") {
    TempFile f("features.csv");
    {
        std::ofstream out(f.path);
        out << "1.0,2.0,3.0\n-1.5,0.25,4\n";
    }
    FeatureSet fs = read_csv_features(f.path);
    REQUIRE(fs.n() == 2);
    REQUIRE(fs.d() == 3);
    CHECK(fs.data(0, 1) == doctest::Approx(2.0));
    CHECK(fs.data(1, 0) == doctest::Approx(-1.5));
    CHECK(fs.data(1, 2) == doctest::Approx(4.0));
}

TEST_CASE("ragged csv rows are rejected") {
    TempFile f("ragged.csv");
    {
        std::ofstream out(f.path);
        out << "1,2,3\n4,5\n";
    }
    CHECK_THROWS_AS(read_csv_features(f.path), IoError);
}

TEST_CASE("sidecars round-trip keys in order") {
    TempFile f("meta.txt");
    std::vector<std::pair<std::string, std::string>> kv{
        {"iters", "42"}, {"converged", "true"}, {"primal", "1.25"}};
    write_sidecar(f.path, kv);
    CHECK(read_sidecar(f.path) == kv);
}

TEST_CASE("pyramids round-trip through manifest plus level files") {
    TempFile manifest("pyr.txt");
    TempFile l0("pyr.level0.uft"), l1("pyr.level1.uft");
    FeaturePyramid pyr =
        gen_pyramid_from_image_grid(FeatureSet{Matrix::Random(4, 3)}, 2, 0.1, 9);
    write_pyramid(manifest.path, pyr);
    FeaturePyramid back = read_pyramid(manifest.path);
    REQUIRE(back.levels.size() == 2);
    CHECK(back.base_h == pyr.base_h);
    CHECK(back.base_w == pyr.base_w);
    for (size_t k = 0; k < 2; ++k) {
        CHECK(back.levels[k].h == pyr.levels[k].h);
        CHECK((back.levels[k].data - pyr.levels[k].data).cwiseAbs().maxCoeff() <
              1e-7);
    }
}

TEST_CASE("doubles format deterministically and round-trip") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    double v = 0.1234567890123456789;
    CHECK(std::stod(format_double(v)) == v);
}
