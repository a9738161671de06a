#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ncma/sim.hpp"

namespace ncma::sim {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(j,
                 {"mode", "snr_db", "n_beacons", "l", "n_max_factor", "k_info", "seed", "llr_clip",
                  "exact_llr", "noise_var_ratio"},
                 "top level");

  ScenarioConfig cfg;
  if (!j.contains("mode")) throw std::invalid_argument("config: missing 'mode'");
  cfg.mode = phy::mode_from_name(j.at("mode").get<std::string>());

  if (j.contains("snr_db")) {
    const json& s = j.at("snr_db");
    if (!s.is_object()) throw std::invalid_argument("config: 'snr_db' must be a section");
    reject_unknown(s, {"a", "b", "c"}, "snr_db");
    if (s.contains("a")) cfg.snr_a_db = s.at("a").get<double>();
    if (s.contains("b")) cfg.snr_b_db = s.at("b").get<double>();
    if (s.contains("c")) {
      const json& c = s.at("c");
      cfg.snr_c_db.clear();
      if (c.is_array())
        for (const json& v : c) cfg.snr_c_db.push_back(v.get<double>());
      else
        cfg.snr_c_db.push_back(c.get<double>());
    }
  }

  if (j.contains("l")) {
    const json& l = j.at("l");
    if (!l.is_object()) throw std::invalid_argument("config: 'l' must be a section");
    reject_unknown(l, {"a", "b", "c"}, "l");
    if (l.contains("a")) cfg.l_norm[0] = l.at("a").get<int>();
    if (l.contains("b")) cfg.l_norm[1] = l.at("b").get<int>();
    if (l.contains("c")) cfg.l_norm[2] = l.at("c").get<int>();
  }

  if (j.contains("n_beacons")) cfg.n_beacons = j.at("n_beacons").get<int>();
  if (j.contains("n_max_factor")) cfg.n_max_factor = j.at("n_max_factor").get<int>();
  if (j.contains("k_info")) cfg.k_info = j.at("k_info").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  if (j.contains("llr_clip")) cfg.llr_clip = j.at("llr_clip").get<double>();
  if (j.contains("exact_llr")) cfg.exact_llr = j.at("exact_llr").get<bool>();
  if (j.contains("noise_var_ratio")) cfg.noise_var_ratio = j.at("noise_var_ratio").get<double>();

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ncma::sim
