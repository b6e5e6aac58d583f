#pragma once

// JSON form of verification suite results.

#include <string>

#include "quasitile/io.hpp"
#include "quasitile/verify.hpp"

namespace quasitile::io {

inline json metric_to_json(const verify::Metric& m) {
  return std::visit([](const auto& v) { return json(v); }, m);
}

inline json to_json(const verify::SuiteResult& r) {
  json j;
  j["suite"] = r.name;
  j["seed"] = r.seed;
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = metric_to_json(v);
  j["params"] = params;
  j["trials"] = r.trials;
  j["attempts"] = r.attempts;
  j["hypotheses_met"] = r.hypotheses_met;
  j["violations"] = r.violations;
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = metric_to_json(v);
  j["metrics"] = metrics;
  j["failures"] = r.failures;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const verify::QuasitilingCheck& c) {
  json j;
  j["tiles"] = c.tiles;
  j["tiles_per_level"] = c.tiles_per_level;
  put_rational(j, "covering", c.covering);
  put_rational(j, "bound", c.bound);
  j["covering_ok"] = c.covering_ok;
  j["eps_disjoint"] = c.eps_disjoint;
  j["insertion_certificate_valid"] = c.insertion_certificate;
  j["addable_centers"] = c.addable_centers;
  j["maximal"] = c.maximal;
  j["disjointify"] = {{"pairwise_disjoint", c.disjoint_after},
                      {"centers_retained", c.centers_retained},
                      {"min_retention_num", c.min_retention.num()},
                      {"min_retention_den", c.min_retention.den()},
                      {"min_retention", c.min_retention.to_double()},
                      {"tiles_below_1_minus_eps", c.retention_shortfalls},
                      {"retention_ok", c.retention_ok}};
  return j;
}

inline json to_json(const verify::MarkerSummary& m) {
  return {{"markers", m.markers},
          {"interior_size", m.interior},
          {"pairwise_disjoint", m.disjoint},
          {"covers_interior", m.covers_interior}};
}

}  // namespace quasitile::io
