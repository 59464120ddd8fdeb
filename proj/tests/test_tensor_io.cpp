#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "kspos/curvature.hpp"
#include "kspos/error.hpp"
#include "kspos/tensor_io.hpp"

using namespace kspos;
using C = std::complex<double>;

namespace {

Tensor parse(const std::string& text) {
  std::istringstream in(text);
  return read_tensor_json(in);
}

void rejects(const std::string& text, const std::string& fragment) {
  CAPTURE(text);
  try {
    parse(text);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
    CHECK(std::string(e.what()).find(fragment) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("round trip") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Tensor R = sample_nakano_positive(3, 2, seed);
    const Tensor back = parse(write_tensor_json(R));
    CHECK(back.base_dim() == 3);
    CHECK(back.fibre_rank() == 2);
    CHECK(back.nakano_matrix() == R.nakano_matrix());
  }
  const Tensor g = grassmannian_curvature(4, 2);
  CHECK(parse(write_tensor_json(g)).nakano_matrix() == g.nakano_matrix());

  const Tensor zero(2, 3);
  const Tensor z = parse(write_tensor_json(zero));
  CHECK(z.base_dim() == 2);
  CHECK(z.fibre_rank() == 3);
  CHECK(z.nakano_matrix().isZero(0));
}

TEST_CASE("explicit document") {
  const Tensor R = parse(R"({"n": 2, "r": 1, "entries": [[0,0,0,0, 2,0], [0,0,0,1, 0,1], [0,0,1,0, 0,-1]]})");
  CHECK(R(0, 0, 0, 0) == C(2, 0));
  CHECK(R(0, 0, 0, 1) == C(0, 1));
  CHECK(R(0, 0, 1, 0) == C(0, -1));
  CHECK(R(0, 0, 1, 1) == C(0, 0));
  CHECK(R.is_hermitian());
}

TEST_CASE("file reading") {
  const std::string path = "tensor_io_roundtrip.json";
  {
    std::ofstream out(path);
    out << write_tensor_json(identity_curvature(2, 2));
  }
  CHECK(read_tensor_file(path).nakano_matrix() == identity_curvature(2, 2).nakano_matrix());
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_tensor_file("no/such/tensor.json"), Error);
}

TEST_CASE("malformed documents") {
  rejects("{", "tensor file");
  rejects("[]", "n, r and entries");
  rejects(R"({"n": 2, "r": 1})", "n, r and entries");
  rejects(R"({"n": 2.5, "r": 1, "entries": []})", "integers");
  rejects(R"({"n": 0, "r": 1, "entries": []})", "n*r <= 4096");
  rejects(R"({"n": 65, "r": 64, "entries": []})", "n*r <= 4096");
  rejects(R"({"n": 2, "r": 1, "entries": {}})", "array");
  rejects(R"({"n": 2, "r": 1, "entries": [[0,0,0,0,1]]})", "[alpha, beta, j, k, re, im]");
  rejects(R"({"n": 2, "r": 1, "entries": [[1,0,0,0,1,0]]})", "alpha out of range");
  rejects(R"({"n": 2, "r": 1, "entries": [[0,0,2,0,1,0]]})", "j out of range");
  rejects(R"({"n": 2, "r": 1, "entries": [[0,0,0,-1,1,0]]})", "k out of range");
  rejects(R"({"n": 2, "r": 1, "entries": [[0,0,0,0,"1",0]]})", "numbers");
  rejects(R"({"n": 2, "r": 1, "entries": [[0,0,0,0,1,0],[0,0,0,0,1,0]]})", "duplicate");
  rejects(R"({"n": 2, "r": 1, "entries": [[0,0,0,1,1,0]]})", "no hermitian partner");
  rejects(R"({"n": 2, "r": 1, "entries": [[0,0,0,1,1,1],[0,0,1,0,1,1]]})", "not conjugate");
  rejects(R"({"n": 2, "r": 1, "entries": [[0,0,0,0,1,0.5]]})", "not conjugate");
  CHECK_NOTHROW(parse(R"({"n": 64, "r": 64, "entries": []})"));
}
