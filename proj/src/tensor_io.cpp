#include "kspos/tensor_io.hpp"

#include <fstream>
#include <map>
#include <tuple>

#include <json.hpp>

namespace kspos {

namespace {

using Key = std::tuple<int, int, int, int>;

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::invalid_input, "tensor file: " + what); }

int index_field(const nlohmann::json& v, int bound, const char* name) {
  if (!v.is_number_integer()) bad(std::string(name) + " must be an integer");
  const auto x = v.get<long long>();
  if (x < 0 || x >= bound) bad(std::string(name) + " out of range");
  return static_cast<int>(x);
}

}  // namespace

Tensor read_tensor_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad(e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("r") || !doc.contains("entries"))
    bad("expected an object with n, r and entries");
  if (!doc["n"].is_number_integer() || !doc["r"].is_number_integer()) bad("n and r must be integers");
  const auto n = doc["n"].get<long long>();
  const auto r = doc["r"].get<long long>();
  if (n < 1 || r < 1 || n * r > 4096) bad("need n, r >= 1 and n*r <= 4096");
  if (!doc["entries"].is_array()) bad("entries must be an array");

  std::map<Key, std::complex<double>> entries;
  for (const auto& e : doc["entries"]) {
    if (!e.is_array() || e.size() != 6) bad("each entry is [alpha, beta, j, k, re, im]");
    const Key key{index_field(e[0], static_cast<int>(r), "alpha"), index_field(e[1], static_cast<int>(r), "beta"),
                  index_field(e[2], static_cast<int>(n), "j"), index_field(e[3], static_cast<int>(n), "k")};
    if (!e[4].is_number() || !e[5].is_number()) bad("re and im must be numbers");
    if (!entries.emplace(key, std::complex<double>(e[4].get<double>(), e[5].get<double>())).second)
      bad("duplicate entry");
  }
  Tensor R(static_cast<int>(n), static_cast<int>(r));
  for (const auto& [key, v] : entries) {
    const auto [a, b, j, k] = key;
    const auto partner = entries.find(Key{b, a, k, j});
    if (partner == entries.end())
      bad("entry (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(j) + "," + std::to_string(k) +
          ") has no hermitian partner");
    if (partner->second != std::conj(v))
      bad("entry (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(j) + "," + std::to_string(k) +
          ") and its partner are not conjugate");
    R.coeff(a, b, j, k) = v;
  }
  return R;
}

Tensor read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_input, "cannot open tensor file " + path);
  return read_tensor_json(in);
}

std::string write_tensor_json(const Tensor& R) {
  nlohmann::ordered_json doc;
  doc["n"] = R.base_dim();
  doc["r"] = R.fibre_rank();
  doc["entries"] = nlohmann::ordered_json::array();
  for (int a = 0; a < R.fibre_rank(); ++a)
    for (int b = 0; b < R.fibre_rank(); ++b)
      for (int j = 0; j < R.base_dim(); ++j)
        for (int k = 0; k < R.base_dim(); ++k) {
          const auto v = R(a, b, j, k);
          if (v != std::complex<double>(0)) doc["entries"].push_back({a, b, j, k, v.real(), v.imag()});
        }
  return doc.dump();
}

}  // namespace kspos
