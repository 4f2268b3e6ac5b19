#include "nirenberg/report.hpp"

#include <cstdio>
#include <fstream>

namespace nirenberg {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

Json vec_json(const Vec& v) {
  Json arr = Json::array();
  for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

Json to_json(const ProblemParams& params) {
  return Json{{"n", params.n},
              {"gamma", params.gamma},
              {"critical_exponent", params.critical_exponent()},
              {"bubble_exponent", params.bubble_exponent()},
              {"gradient_exponent", params.gradient_exponent()}};
}

Json to_json(const ConstantsTable& table) {
  return Json{{"c_n", table.c_n},
              {"S", table.S},
              {"c1", table.c1},
              {"c2", table.c2},
              {"resolutions",
               Json{{"zonal", table.zonal_points},
                    {"radial", table.radial_points}}}};
}

Json to_json(const CriticalPointRecord& record) {
  return Json{{"location", vec_json(record.location.coords())},
              {"index", record.morse_index},
              {"laplacian", record.laplacian},
              {"in_I_plus", record.in_I_plus},
              {"K_value", record.K_value},
              {"residual", record.residual}};
}

Json to_json(const CriticalPointResult& result) {
  Json points = Json::array();
  for (const CriticalPointRecord& r : result.records) points.push_back(to_json(r));
  return Json{{"critical_points", points},
              {"euler_checksum", result.euler_checksum},
              {"failed_starts", result.failed_starts}};
}

Json to_json(const InfinityPoint& point) {
  return Json{{"members", point.members},
              {"p", point.p},
              {"index", point.morse_index},
              {"level", point.critical_level}};
}

Json to_json(const CriterionReport& report) {
  Json sums = Json::object();
  for (const auto& [k, v] : report.per_k_sums) sums[std::to_string(k)] = v;
  Json rep{{"excluded_k", report.excluded_k},
           {"per_k_sums", sums},
           {"criterion_value", report.criterion_value},
           {"maximizers", report.maximizers},
           {"vacuous_I_plus", report.vacuous_Iplus},
           {"conclusion",
            report.conclusion == CriterionConclusion::ExistsWithIndexBound
                ? "exists-with-index-bound"
                : "inconclusive"}};
  if (report.k0)
    rep["k0"] = *report.k0;
  else
    rep["k0"] = nullptr;
  if (report.index_bound >= 0) rep["index_bound"] = report.index_bound;
  return rep;
}

Json to_json(const H1Result& h1) {
  return Json{{"sum", h1.sum}, {"holds", h1.holds}, {"vacuous", h1.vacuous}};
}

Json to_json(const ExpansionReport& report) {
  return Json{{"leading", report.leading},
              {"laplacian_term", report.laplacian_term},
              {"interaction_term", report.interaction_term},
              {"total", report.total()},
              {"eps_sum", report.eps_sum},
              {"f_norm_scale", report.f_norm_scale},
              {"vbar_bound", report.vbar_bound},
              {"in_regime", report.in_regime},
              {"J_numeric", report.J_num},
              {"abs_residual", report.abs_residual},
              {"rel_residual", report.rel_residual}};
}

namespace {

const char* event_name(FlowEventKind kind) {
  switch (kind) {
    case FlowEventKind::Concentration:
      return "Concentration";
    case FlowEventKind::StallNearInterior:
      return "StallNearInterior";
    case FlowEventKind::CenterCollision:
      return "CenterCollision";
    case FlowEventKind::TimeLimit:
      return "TimeLimit";
    case FlowEventKind::StepFailure:
      return "StepFailure";
  }
  return "Unknown";
}

}  // namespace

Json to_json(const FlowEvent& event) {
  Json rep{{"kind", event_name(event.kind)},
           {"s", event.s},
           {"lambda_comparability", event.lambda_comparability},
           {"center_errors", event.center_errors}};
  if (event.target)
    rep["target"] = to_json(*event.target);
  else
    rep["target"] = nullptr;
  return rep;
}

void write_trajectory_csv(const std::string& path, const ProblemParams& params,
                          const FlowResult& result) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open trajectory file " + path);
  const int m = params.ambient_dim();
  const std::size_t p =
      result.samples.empty() ? 0 : result.samples.front().config.p();
  out << "s";
  for (std::size_t i = 0; i < p; ++i) {
    for (int c = 0; c < m; ++c)
      out << ",a" << (i + 1) << "_x" << (c + 1);
    out << ",lambda" << (i + 1);
  }
  out << ",regime,J\n";
  for (const TrajectorySample& sample : result.samples) {
    out << format17(sample.s);
    for (std::size_t i = 0; i < p; ++i) {
      const Vec& x = sample.config.bubbles[i].center.coords();
      for (int c = 0; c < m; ++c) out << "," << format17(x[c]);
      out << "," << format17(sample.config.bubbles[i].lambda);
    }
    const char* tag = sample.tag == Regime::Interior       ? "interior"
                      : sample.tag == Regime::NearCritical ? "near-critical"
                                                           : "concentrating";
    out << "," << tag << "," << format17(sample.reduced_energy) << "\n";
  }
}

bool validate_report(const Json& report, std::string* error) {
  const auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };
  if (!report.is_object()) return fail("report is not an object");
  if (!report.contains("meta") || !report["meta"].is_object())
    return fail("missing object key 'meta'");
  const Json& meta = report["meta"];
  for (const char* key : {"command", "n", "gamma", "seed"})
    if (!meta.contains(key)) return fail(std::string("meta missing '") + key + "'");
  if (report.contains("constants")) {
    for (const char* key : {"c_n", "S", "c1", "c2", "resolutions"})
      if (!report["constants"].contains(key))
        return fail(std::string("constants missing '") + key + "'");
  }
  if (report.contains("curvature")) {
    const Json& c = report["curvature"];
    if (!c.contains("critical_points") || !c["critical_points"].is_array())
      return fail("curvature missing critical_points array");
    for (const Json& r : c["critical_points"])
      for (const char* key :
           {"location", "index", "laplacian", "in_I_plus", "K_value"})
        if (!r.contains(key))
          return fail(std::string("critical point missing '") + key + "'");
  }
  if (report.contains("catalog") && !report["catalog"].is_array())
    return fail("catalog is not an array");
  if (report.contains("criterion")) {
    for (const char* key :
         {"per_k_sums", "criterion_value", "conclusion", "k0"})
      if (!report["criterion"].contains(key))
        return fail(std::string("criterion missing '") + key + "'");
  }
  if (report.contains("checks")) {
    if (!report["checks"].is_array()) return fail("checks is not an array");
    for (const Json& c : report["checks"])
      for (const char* key : {"name", "pass", "measured"})
        if (!c.contains(key))
          return fail(std::string("check missing '") + key + "'");
  }
  if (report.contains("events") && !report["events"].is_array())
    return fail("events is not an array");
  if (error) error->clear();
  return true;
}

}  // namespace nirenberg
