#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "circleflow/errors.hpp"
#include "circleflow/io.hpp"

namespace circleflow {

namespace {

using nlohmann::json;

// NaN is written as null.
json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double real_or_nan(const json& value) {
  return value.is_number() ? value.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void write_trace(std::ostream& out, const FlowResult& result) {
  const FlowTrace& trace = result.trace;
  for (const FlowSample& s : trace.samples) {
    json record{{"t", s.t},
                {"radii", s.radii},
                {"K", s.curvatures},
                {"M", s.max_curvature},
                {"m", s.min_curvature},
                {"h", s.step},
                {"err", s.error_estimate}};
    out << record.dump() << '\n';
  }
  json terminal{{"termination", std::string(to_string(trace.termination))},
                {"geometry", std::string(to_string(trace.geometry))},
                {"targets", trace.targets}};
  if (result.report) {
    const ConvergenceReport& r = *result.report;
    terminal["limit_radii"] = r.limit_radii;
    terminal["limit_K"] = r.limit_curvatures;
    terminal["rate_c1"] = real(r.rate_c1);
    terminal["rate_c2"] = real(r.rate_c2);
    terminal["residual"] = real(r.residual);
    terminal["exponential"] = r.exponential;
  }
  out << terminal.dump() << '\n';
}

ParsedTrace read_trace(std::istream& in) {
  ParsedTrace parsed;
  bool terminated = false;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
      if (record.contains("termination")) {
        FlowTrace& trace = parsed.trace;
        trace.termination = termination_from_string(record.at("termination").get<std::string>());
        trace.geometry = geometry_from_string(record.at("geometry").get<std::string>());
        trace.targets = record.at("targets").get<std::vector<double>>();
        if (record.contains("limit_radii")) {
          ConvergenceReport r;
          r.limit_radii = record.at("limit_radii").get<std::vector<double>>();
          r.limit_curvatures = record.at("limit_K").get<std::vector<double>>();
          r.rate_c1 = real_or_nan(record.at("rate_c1"));
          r.rate_c2 = real_or_nan(record.at("rate_c2"));
          r.residual = real_or_nan(record.at("residual"));
          r.exponential = record.at("exponential").get<bool>();
          parsed.report = std::move(r);
        }
        terminated = true;
        continue;
      }
      FlowSample s;
      s.t = record.at("t").get<double>();
      s.radii = record.at("radii").get<std::vector<double>>();
      s.curvatures = record.at("K").get<std::vector<double>>();
      s.max_curvature = record.at("M").get<double>();
      s.min_curvature = record.at("m").get<double>();
      s.step = record.at("h").get<double>();
      s.error_estimate = record.value("err", 0.0);
      parsed.trace.samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError("trace line " + std::to_string(line_number) + ": " + e.what());
    } catch (const DomainError& e) {
      throw ParseError("trace line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  if (!terminated) throw ParseError("trace has no terminal record");
  return parsed;
}

}  // namespace circleflow
