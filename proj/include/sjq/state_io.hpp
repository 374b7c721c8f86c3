#ifndef SJQ_STATE_IO_HPP
#define SJQ_STATE_IO_HPP

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sjq/sjj_model.hpp"

// JSON document format for two-mode states:
//   {"N": int, "amplitudes_re": [...], "amplitudes_im": [...]}

namespace sjq {

inline nlohmann::json state_to_json(const TwoModeState& state) {
  nlohmann::json j;
  j["N"] = state.N;
  auto& re = j["amplitudes_re"] = nlohmann::json::array();
  auto& im = j["amplitudes_im"] = nlohmann::json::array();
  for (const auto& a : state.amplitudes) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  return j;
}

inline TwoModeState state_from_json(const nlohmann::json& j) {
  const long N = j.at("N").get<long>();
  const auto& re = j.at("amplitudes_re");
  const auto& im = j.at("amplitudes_im");
  if (re.size() != static_cast<std::size_t>(N + 1) || im.size() != re.size())
    throw std::domain_error("state document: amplitude arrays must have N+1 entries");
  std::vector<complexd> amps(N + 1);
  for (long n = 0; n <= N; ++n)
    amps[n] = complexd(re[n].get<double>(), im[n].get<double>());
  TwoModeState state(N, std::move(amps));
  const double n2 = state.norm_sq();
  if (std::abs(n2 - 1.0) > 1e-8)
    throw std::domain_error("state document: amplitudes are not normalized");
  state.normalize();
  return state;
}

inline void save_state(const TwoModeState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << state_to_json(state).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline TwoModeState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return state_from_json(j);
}

}  // namespace sjq

#endif  // SJQ_STATE_IO_HPP
