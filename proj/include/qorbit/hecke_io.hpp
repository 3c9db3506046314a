#pragma once

// JSON R-matrix files:
//   {"dim": N, "q": "<scalar>", "entries": [{"out_pair": [k,l], "in_pair": [i,j], "value": "<scalar>"}, ...]}
// Indices are 1-based; R(e_i⊗e_j) = Σ R^{kl}_{ij} e_k⊗e_l. `q` defaults to 1.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qorbit/hecke.hpp"

namespace qorbit {

inline HeckeSymmetry hecke_from_json(const nlohmann::json& j, const std::string& provenance) {
  try {
    std::size_t N = j.at("dim").get<std::size_t>();
    if (N < 1 || N > 16) fail(ErrorKind::ParseError, "dim must be between 1 and 16");
    Scalar q(1);
    if (j.contains("q")) {
      const auto& jq = j.at("q");
      q = jq.is_string() ? parse_scalar(jq.get<std::string>()) : parse_scalar(jq.dump());
    }
    MatrixS r(N * N, N * N);
    for (const auto& e : j.at("entries")) {
      auto out = e.at("out_pair").get<std::vector<std::size_t>>();
      auto in = e.at("in_pair").get<std::vector<std::size_t>>();
      if (out.size() != 2 || in.size() != 2) fail(ErrorKind::ParseError, "index pairs must have two entries");
      for (auto x : {out[0], out[1], in[0], in[1]})
        if (x < 1 || x > N) fail(ErrorKind::ParseError, "index out of range 1.." + std::to_string(N));
      const auto& v = e.at("value");
      Scalar val = v.is_string() ? parse_scalar(v.get<std::string>()) : parse_scalar(v.dump());
      r((out[0] - 1) * N + (out[1] - 1), (in[0] - 1) * N + (in[1] - 1)) += val;
    }
    return make_hecke(TensorOp(N, 2, std::move(r)), q, provenance);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("malformed R-matrix file: ") + e.what());
  }
}

inline HeckeSymmetry hecke_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  return hecke_from_json(j, "file:" + path);
}

inline nlohmann::json hecke_to_json(const HeckeSymmetry& hs) {
  nlohmann::json j;
  j["dim"] = hs.N;
  j["q"] = hs.q.to_string();
  j["entries"] = nlohmann::json::array();
  std::size_t N = hs.N;
  for (std::size_t r = 0; r < N * N; ++r)
    for (std::size_t c = 0; c < N * N; ++c)
      if (!hs.R.m(r, c).is_zero())
        j["entries"].push_back({{"out_pair", {r / N + 1, r % N + 1}},
                                {"in_pair", {c / N + 1, c % N + 1}},
                                {"value", hs.R.m(r, c).to_string()}});
  return j;
}

}  // namespace qorbit
