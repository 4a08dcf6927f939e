#include <doctest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "kframe/codec.hpp"
#include "test_support.hpp"

using namespace kframe;
using namespace kframe::testing;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("kframe-codec-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("operator documents round trip bit-exactly") {
  TempDir dir;
  SUBCASE("identity") {
    const Mat a = identity(2);
    save_document(operator_to_json(a), dir.file("id.json"));
    const Mat b = load_operator(dir.file("id.json"));
    CHECK(a == b);
  }
  SUBCASE("random complex entries at full precision") {
    Rng rng(404);
    const Mat a = gaussian_matrix(rng, 3, 5);
    save_document(operator_to_json(a), dir.file("a.json"));
    const Mat b = load_operator(dir.file("a.json"));
    REQUIRE(b.rows() == 3);
    REQUIRE(b.cols() == 5);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 5; ++j) CHECK(a(i, j) == b(i, j));
  }
}

TEST_CASE("frame documents round trip bit-exactly") {
  TempDir dir;
  const FrameSystem f = mercedes_benz();
  save_document(frame_to_json(f), dir.file("mb.json"));
  const FrameSystem g = load_frame(dir.file("mb.json"));
  REQUIRE(g.dim == 2);
  REQUIRE(g.vectors.size() == 3);
  for (std::size_t j = 0; j < 3; ++j)
    for (Index i = 0; i < 2; ++i) CHECK(f.vectors[j](i) == g.vectors[j](i));

  // Serialize twice: identical bytes.
  CHECK(dump_document(frame_to_json(f)) == dump_document(frame_to_json(g)));
}

TEST_CASE("subspace documents validate orthonormality") {
  TempDir dir;
  Rng rng(2);
  const Subspace s{4, haar_unitary(rng, 4).leftCols(2)};
  save_document(subspace_to_json(s), dir.file("w.json"));
  const Subspace t = load_subspace(dir.file("w.json"));
  CHECK(t.ambient_dim == 4);
  CHECK(t.dim() == 2);

  Subspace bad = s;
  bad.basis *= 2.0;
  save_document(subspace_to_json(bad), dir.file("bad.json"));
  CHECK_THROWS_AS(load_subspace(dir.file("bad.json")), Error);
}

TEST_CASE("schema violations are invalid input") {
  TempDir dir;
  SUBCASE("zero dimension") {
    std::ofstream(dir.file("f.json"))
        << R"({"kind":"frame","dim":0,"vectors":[[[1.0,0.0]]]})";
    CHECK_THROWS_AS(load_frame(dir.file("f.json")), Error);
  }
  SUBCASE("wrong kind tag") {
    std::ofstream(dir.file("k.json")) << R"({"kind":"frame","dim":1,"vectors":[[[1.0,0.0]]]})";
    CHECK_THROWS_AS(load_operator(dir.file("k.json")), Error);
  }
  SUBCASE("ragged entries") {
    std::ofstream(dir.file("r.json"))
        << R"({"kind":"operator","rows":2,"cols":2,"entries":[[[1.0,0.0]],[[0.0,0.0],[1.0,0.0]]]})";
    CHECK_THROWS_AS(load_operator(dir.file("r.json")), Error);
  }
  SUBCASE("non-finite entries") {
    std::ofstream(dir.file("n.json"))
        << R"({"kind":"operator","rows":1,"cols":1,"entries":[[[1e999,0.0]]]})";
    CHECK_THROWS_AS(load_operator(dir.file("n.json")), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_operator(dir.file("nope.json")), Error);
  }
}
