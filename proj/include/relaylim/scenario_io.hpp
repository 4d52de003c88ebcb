#pragma once

// Flat key-value scenario documents (JSON object, one level deep):
//
//   {
//     "protocol": "af", "mode": "variable",
//     "hop1.p_watts": 1, "hop1.n_watts": 1, "hop1.alpha": 2,
//     "hop1.snr_db": 20, "hop1.kappa": 0.1,
//     "hop2.p_watts": 1, "hop2.n_watts": 1, "hop2.alpha": 2,
//     "hop2.beta": 50, "hop2.kappa_t": 0.07, "hop2.kappa_r": 0.07
//   }
//
// Each hop carries exactly one of {beta, snr_db} and exactly one of
// {kappa, kappa_t + kappa_r}.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "relaylim/model.hpp"

namespace relaylim {

namespace detail {

inline double require_number(const nlohmann::json& doc, const std::string& key) {
  if (!doc.contains(key)) throw UsageError("scenario: missing key '" + key + "'");
  const auto& v = doc.at(key);
  if (!v.is_number()) throw UsageError("scenario: key '" + key + "' must be a number");
  return v.get<double>();
}

inline std::optional<double> optional_number(const nlohmann::json& doc, const std::string& key) {
  if (!doc.contains(key)) return std::nullopt;
  const auto& v = doc.at(key);
  if (!v.is_number()) throw UsageError("scenario: key '" + key + "' must be a number");
  return v.get<double>();
}

inline const char* const kHopFields[] = {"p_watts", "n_watts", "alpha", "beta",
                                         "snr_db",  "kappa",   "kappa_t", "kappa_r"};

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& doc) {
  if (!doc.is_object()) throw UsageError("scenario: document must be a JSON object");

  int hop_count = 0;
  for (const auto& [key, value] : doc.items()) {
    if (key == "protocol" || key == "mode") continue;
    const auto dot = key.find('.');
    bool known = false;
    if (key.rfind("hop", 0) == 0 && dot != std::string::npos && dot > 3) {
      int index = 0;
      try {
        std::size_t used = 0;
        index = std::stoi(key.substr(3, dot - 3), &used);
        known = used == dot - 3 && index >= 1;
      } catch (const std::exception&) {
        known = false;
      }
      const std::string field = key.substr(dot + 1);
      bool field_ok = false;
      for (const char* f : detail::kHopFields) field_ok = field_ok || field == f;
      known = known && field_ok;
      if (known) hop_count = std::max(hop_count, index);
    }
    if (!known) throw UsageError("scenario: unknown key '" + key + "'");
  }

  if (!doc.contains("protocol") || !doc.at("protocol").is_string()) {
    throw UsageError("scenario: missing key 'protocol'");
  }
  const Protocol protocol = parse_protocol(doc.at("protocol").get<std::string>());
  GainMode mode = GainMode::variable;
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) throw UsageError("scenario: key 'mode' must be a string");
    mode = parse_gain_mode(doc.at("mode").get<std::string>());
  } else if (protocol == Protocol::amplify_forward) {
    throw UsageError("scenario: missing key 'mode'");
  }

  std::vector<Hop> hops;
  for (int i = 1; i <= hop_count; ++i) {
    const std::string p = "hop" + std::to_string(i) + ".";
    const double power = detail::require_number(doc, p + "p_watts");
    const double noise = detail::require_number(doc, p + "n_watts");
    const double alpha_raw = detail::require_number(doc, p + "alpha");
    if (alpha_raw != std::floor(alpha_raw)) {
      throw UsageError("scenario: key '" + p + "alpha' must be an integer");
    }
    const auto beta = detail::optional_number(doc, p + "beta");
    const auto snr_db = detail::optional_number(doc, p + "snr_db");
    if (beta.has_value() == snr_db.has_value()) {
      throw UsageError("scenario: exactly one of '" + p + "beta' and '" + p + "snr_db' required");
    }
    const auto kappa = detail::optional_number(doc, p + "kappa");
    const auto kt = detail::optional_number(doc, p + "kappa_t");
    const auto kr = detail::optional_number(doc, p + "kappa_r");
    if (kt.has_value() != kr.has_value()) {
      throw UsageError("scenario: '" + p + "kappa_t' and '" + p + "kappa_r' come as a pair");
    }
    if (kappa.has_value() == kt.has_value()) {
      throw UsageError("scenario: exactly one of '" + p + "kappa' and the '" + p +
                       "kappa_t'/'kappa_r' pair required");
    }
    const double agg = kappa ? *kappa : aggregate_kappa({*kt, *kr});
    Hop hop(power, noise, static_cast<int>(alpha_raw), beta.value_or(1.0), agg);
    if (snr_db) hop = hop.with_beta(beta_for_target_snr(hop, db_to_linear(*snr_db)));
    hops.push_back(hop);
  }
  return Scenario(std::move(hops), protocol, mode);
}

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("scenario: malformed document: ") + e.what());
  }
  return parse_scenario(doc);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("scenario: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

/// Serializes with explicit beta and aggregate kappa per hop.
inline nlohmann::json to_json(const Scenario& s) {
  nlohmann::json doc;
  doc["protocol"] = std::string(to_string(s.protocol()));
  doc["mode"] = std::string(to_string(s.mode()));
  for (std::size_t i = 0; i < s.hops().size(); ++i) {
    const std::string p = "hop" + std::to_string(i + 1) + ".";
    const Hop& h = s.hop(i);
    doc[p + "p_watts"] = h.power();
    doc[p + "n_watts"] = h.noise();
    doc[p + "alpha"] = h.alpha();
    doc[p + "beta"] = h.beta();
    doc[p + "kappa"] = h.kappa();
  }
  return doc;
}

}  // namespace relaylim
