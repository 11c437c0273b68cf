#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "geometry.hpp"
#include "info_geometry.hpp"
#include "optimizer.hpp"
#include "support_enum.hpp"

#ifndef ENTROCONE_VERSION
#define ENTROCONE_VERSION "0.0.0"
#endif

namespace entrocone {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = ENTROCONE_VERSION;

/// What every artifact carries about the run that produced it.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  int restarts = 64;
  int threads = 1;
  bool long_run = false;
  double violation_tol = kViolationTol;
  double ingleton_tol = 1e-9;
  double dedupe_tol = 1e-6;
  double lp_tol = 1e-8;
  Json args = Json::object();

  Json to_json() const {
    return Json{{"command", command},
                {"version", kVersion},
                {"seed", seed},
                {"restarts", restarts},
                {"threads", threads},
                {"long_run", long_run},
                {"tolerances",
                 {{"violation", violation_tol}, {"ingleton", ingleton_tol}, {"dedupe", dedupe_tol}, {"lp", lp_tol}}},
                {"args", args}};
  }
};

// JSONL files open with one metadata line {"meta": {...}}; readers skip it.
// CSV files open with a "# " comment line holding the same object.

inline void write_meta_line(std::ostream& os, const RunConfig& cfg) { os << Json{{"meta", cfg.to_json()}}.dump() << '\n'; }

inline void write_meta_comment(std::ostream& os, const RunConfig& cfg) { os << "# " << cfg.to_json().dump() << '\n'; }

namespace detail {

/// Calls f(json, line_number) for every record line, skipping blanks and meta lines.
template <class F>
void for_each_record(std::istream& is, F&& f) {
  std::string line;
  std::size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), no);
    }
    if (!j.is_object()) throw ParseError("record is not a JSON object", no);
    if (j.contains("meta")) continue;
    try {
      f(j, no);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), no);
    }
  }
}

}  // namespace detail

// ---- supports ----

inline Json support_record_json(const OrbitRecord& rec) {
  return Json{{"k", rec.canonical.k()},
              {"n", rec.canonical.n()},
              {"rgs", rec.canonical.rgs()},
              {"stab", rec.stabilizer_order},
              {"orbit", rec.orbit_size}};
}

inline void write_support_jsonl(std::ostream& os, const std::vector<OrbitRecord>& recs, const RunConfig& cfg) {
  write_meta_line(os, cfg);
  for (const auto& r : recs) os << support_record_json(r).dump() << '\n';
}

struct SupportLine {
  Support support;
  std::size_t line = 0;
};

inline std::vector<SupportLine> read_support_jsonl(std::istream& is) {
  std::vector<SupportLine> out;
  detail::for_each_record(is, [&](const Json& j, std::size_t no) {
    if (!j.contains("rgs") || !j["rgs"].is_array()) throw ParseError("missing \"rgs\" array", no);
    auto rgs = j["rgs"].get<std::vector<std::string>>();
    Support s = Support::from_rgs(rgs);
    if (j.contains("k") && j["k"].get<int>() != s.k()) throw ParseError("\"k\" disagrees with the rgs strings", no);
    if (j.contains("n") && j["n"].get<int>() != s.n()) throw ParseError("\"n\" disagrees with the rgs strings", no);
    out.push_back({std::move(s), no});
  });
  return out;
}

inline void write_census_csv(std::ostream& os, const std::vector<CensusCell>& cells, const RunConfig& cfg) {
  write_meta_comment(os, cfg);
  os << "n,k,count\n";
  for (const auto& c : cells) os << c.n << ',' << c.k << ',' << c.count << '\n';
}

// ---- optimization results ----

struct ResultRow {
  std::vector<std::string> support_rgs;
  std::uint64_t cost_seed = 0;
  double score = 0;
  std::vector<double> probs;
  std::vector<double> hvec;  // 2^n - 1 entries, ascending mask
  Json extra = Json::object();

  EntropicVector h() const {
    int n = 0;
    while ((std::size_t{1} << n) - 1 < hvec.size()) ++n;
    return EntropicVector::from_nonempty(n, hvec);
  }
};

inline Json result_json(const ResultRow& r) {
  Json j{{"support_rgs", r.support_rgs}, {"cost_seed", r.cost_seed}, {"score", r.score}, {"probs", r.probs},
         {"hvec", r.hvec}};
  for (auto& [k, v] : r.extra.items()) j[k] = v;
  return j;
}

inline ResultRow result_row(const OptResult& r) {
  ResultRow row{r.support.rgs(), 0, r.best_value, r.probs, r.vector.nonempty()};
  row.extra["boundary"] = r.boundary;
  return row;
}

inline ResultRow result_row(const HarvestPoint& p) {
  ResultRow row{p.support_rgs, p.cost_seed, ingleton_score(p.h), p.probs, p.h.nonempty()};
  row.extra["cost_value"] = p.value;
  row.extra["variable_perm"] = p.variable_perm;
  return row;
}

inline void write_results_jsonl(std::ostream& os, const std::vector<ResultRow>& rows, const RunConfig& cfg) {
  write_meta_line(os, cfg);
  for (const auto& r : rows) os << result_json(r).dump() << '\n';
}

inline std::vector<ResultRow> read_results_jsonl(std::istream& is) {
  std::vector<ResultRow> out;
  detail::for_each_record(is, [&](const Json& j, std::size_t no) {
    if (!j.contains("hvec") || !j["hvec"].is_array()) throw ParseError("missing \"hvec\" array", no);
    ResultRow r;
    r.hvec = j["hvec"].get<std::vector<double>>();
    const std::size_t len = r.hvec.size();
    if (len == 0 || ((len + 1) & len) != 0) throw ParseError("\"hvec\" length is not 2^n - 1", no);
    if (j.contains("support_rgs")) r.support_rgs = j["support_rgs"].get<std::vector<std::string>>();
    if (j.contains("cost_seed")) r.cost_seed = j["cost_seed"].get<std::uint64_t>();
    if (j.contains("score")) r.score = j["score"].is_null() ? 0.0 : j["score"].get<double>();
    if (j.contains("probs")) r.probs = j["probs"].get<std::vector<double>>();
    out.push_back(std::move(r));
  });
  return out;
}

// ---- geometry reports ----

inline Json volume_json(const VolumeEstimate& v, const RunConfig& cfg) {
  return Json{{"fraction", v.fraction},       {"samples", v.samples},      {"stderr", v.stderr_},
              {"generator_set", v.generator_set}, {"normalization", "hN=1"}, {"config", cfg.to_json()}};
}

inline Json verification_json(const std::vector<CheckResult>& checks, const RunConfig& cfg) {
  Json arr = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back(Json{{"name", c.name}, {"trials", c.trials}, {"max_error", c.max_error}, {"pass", c.pass}});
    all = all && c.pass;
  }
  return Json{{"checks", arr}, {"pass", all}, {"config", cfg.to_json()}};
}

}  // namespace entrocone
