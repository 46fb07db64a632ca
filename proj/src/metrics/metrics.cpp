// SPDX-License-Identifier: BSD-3-Clause
// Copyright (c) 2026, The rosetta-pd Authors

#include "rpd/metrics/metrics.h"

#include <fmt/core.h>
#include <sys/resource.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "rpd/core/error.h"
#include "rpd/core/stats.h"
#include "rpd/core/text.h"

namespace rpd::metrics {

extern const char* const kSchemaText;

namespace {

constexpr std::string_view kTimingNote = "not computed: no static timing engine in this flow";
constexpr std::string_view kPowerNote = "not computed: no power engine in this flow";

bool typeMatches(const nlohmann::json& v, std::string_view type)
{
  if (type == "string") {
    return v.is_string();
  }
  if (type == "integer") {
    return v.is_number_integer();
  }
  if (type == "number") {
    return v.is_number();
  }
  if (type == "object") {
    return v.is_object();
  }
  if (type == "array") {
    return v.is_array();
  }
  if (type == "boolean") {
    return v.is_boolean();
  }
  if (type == "null") {
    return v.is_null();
  }
  return false;
}

// Checks the keywords the shipped schema uses: const, enum, type,
// minimum, maximum, minLength, required, properties,
// additionalProperties, items.
void check(const nlohmann::json& v,
           const nlohmann::json& s,
           const std::string& path,
           bool strict,
           std::vector<std::string>& errors)
{
  const std::string where = path.empty() ? "/" : path;
  if (auto it = s.find("const"); it != s.end() && v != *it) {
    errors.push_back(fmt::format("{}: expected {}", where, it->dump()));
  }
  if (auto it = s.find("enum"); it != s.end()
      && std::find(it->begin(), it->end(), v) == it->end()) {
    errors.push_back(fmt::format("{}: value not in enum", where));
  }
  if (auto it = s.find("type"); it != s.end()) {
    bool ok = false;
    if (it->is_string()) {
      ok = typeMatches(v, it->get<std::string>());
    } else {
      for (const auto& t : *it) {
        ok = ok || typeMatches(v, t.get<std::string>());
      }
    }
    if (!ok) {
      errors.push_back(fmt::format("{}: expected type {}", where, it->dump()));
      return;
    }
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (auto it = s.find("minimum"); it != s.end() && x < it->get<double>()) {
      errors.push_back(fmt::format("{}: below minimum {}", where, it->dump()));
    }
    if (auto it = s.find("maximum"); it != s.end() && x > it->get<double>()) {
      errors.push_back(fmt::format("{}: above maximum {}", where, it->dump()));
    }
  }
  if (v.is_string()) {
    if (auto it = s.find("minLength"); it != s.end()
        && v.get<std::string>().size() < it->get<std::size_t>()) {
      errors.push_back(fmt::format("{}: shorter than {}", where, it->dump()));
    }
  }
  if (v.is_object()) {
    if (auto it = s.find("required"); it != s.end()) {
      for (const auto& key : *it) {
        if (!v.contains(key.get<std::string>())) {
          errors.push_back(fmt::format("{}: missing key '{}'", where, key.get<std::string>()));
        }
      }
    }
    const auto props = s.find("properties");
    const auto extra = s.find("additionalProperties");
    for (const auto& [key, value] : v.items()) {
      const std::string sub = path + "/" + key;
      if (props != s.end() && props->contains(key)) {
        check(value, (*props)[key], sub, strict, errors);
      } else if (extra != s.end()) {
        if (extra->is_boolean()) {
          if (!extra->get<bool>() && strict) {
            errors.push_back(fmt::format("{}: unknown key", sub));
          }
        } else {
          check(value, *extra, sub, strict, errors);
        }
      }
    }
  }
  if (v.is_array()) {
    if (auto it = s.find("items"); it != s.end()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        check(v[i], *it, fmt::format("{}/{}", path, i), strict, errors);
      }
    }
  }
}

template <typename T>
nlohmann::ordered_json orNull(const std::optional<T>& v)
{
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

template <typename T>
std::optional<T> optionalField(const nlohmann::json& j, std::string_view key)
{
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  return it->get<T>();
}

std::string csvField(std::string_view s)
{
  if (s.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') {
      out += '"';
    }
  }
  out += '"';
  return out;
}

}  // namespace

HpwlResult hpwl(const Design& design)
{
  const DesignIndex index(design);
  HpwlResult out;
  for (const Net& net : design.nets) {
    Dbu xlo = std::numeric_limits<Dbu>::max();
    Dbu ylo = xlo;
    Dbu xhi = std::numeric_limits<Dbu>::min();
    Dbu yhi = xhi;
    bool placed = true;
    for (const NetPin& p : net.pins) {
      const auto loc = pinLocation(index, p);
      if (!loc) {
        placed = false;
        break;
      }
      xlo = std::min(xlo, loc->x);
      ylo = std::min(ylo, loc->y);
      xhi = std::max(xhi, loc->x);
      yhi = std::max(yhi, loc->y);
    }
    if (!placed) {
      ++out.unplaced_nets;
    } else if (!net.pins.empty()) {
      out.total += (xhi - xlo) + (yhi - ylo);
    }
  }
  return out;
}

Dbu computeHpwl(const Design& design)
{
  return hpwl(design).total;
}

Dbu routedLength(const Design& design)
{
  bool any = false;
  Dbu total = 0;
  for (const Net& net : design.nets) {
    any = any || !net.wires.empty() || !net.vias.empty();
    for (const WireSegment& w : net.wires) {
      total += w.length();
    }
  }
  if (!any) {
    fail(Errc::kNoRouting, fmt::format("design '{}' carries no routed wiring", design.name));
  }
  return total;
}

std::int64_t viaCount(const Design& design)
{
  std::int64_t n = 0;
  for (const Net& net : design.nets) {
    n += static_cast<std::int64_t>(net.vias.size());
  }
  return n;
}

Floorplan deriveFloorplan(Area stdcell_area,
                          double utilization,
                          double aspect_ratio,
                          const std::optional<Site>& site,
                          Dbu margin)
{
  if (stdcell_area <= 0) {
    fail(Errc::kNonpositiveInput, fmt::format("std-cell area must be positive (got {})", stdcell_area));
  }
  if (!(utilization > 0.0) || utilization > 1.0) {
    fail(Errc::kNonpositiveInput, fmt::format("utilization must be in (0, 1] (got {})", utilization));
  }
  if (!(aspect_ratio > 0.0)) {
    fail(Errc::kNonpositiveInput, fmt::format("aspect ratio must be positive (got {})", aspect_ratio));
  }
  if (margin < 0) {
    fail(Errc::kNonpositiveInput, fmt::format("margin must not be negative (got {})", margin));
  }
  if (site && (site->width <= 0 || site->height <= 0)) {
    fail(Errc::kNonpositiveInput, fmt::format("site '{}' has a nonpositive size", site->name));
  }
  const auto core_area = static_cast<Area>(std::ceil(static_cast<double>(stdcell_area) / utilization));
  auto roundUp = [](Dbu v, Dbu step) { return (v + step - 1) / step * step; };
  Dbu h = std::max<Dbu>(1, static_cast<Dbu>(std::ceil(std::sqrt(static_cast<double>(core_area) / aspect_ratio))));
  if (site) {
    h = roundUp(h, site->height);
  }
  Dbu w = std::max<Dbu>(1, (core_area + h - 1) / h);
  if (site) {
    w = roundUp(w, site->width);
  }
  Floorplan fp;
  fp.core = {margin, margin, margin + w, margin + h};
  fp.die = {0, 0, w + 2 * margin, h + 2 * margin};
  return fp;
}

double utilizationOf(Area stdcell_area, Area core_area)
{
  return core_area > 0 ? static_cast<double>(stdcell_area) / static_cast<double>(core_area) : 0.0;
}

MetricsRecord measure(const Design& design, std::string stage, std::string flow)
{
  const StatsRecord stats = designStats(design);
  MetricsRecord r;
  r.design = design.name;
  r.stage = std::move(stage);
  r.flow = std::move(flow);
  r.units = design.units;
  r.wirelength_hpwl = computeHpwl(design);
  const bool routed = std::any_of(design.nets.begin(), design.nets.end(), [](const Net& n) {
    return !n.wires.empty();
  });
  if (routed) {
    r.wirelength_routed = routedLength(design);
  }
  r.instance_count = stats.instances;
  r.net_count = stats.nets;
  r.pin_count = stats.pins;
  r.stdcell_area = stats.stdcell_area;
  r.core_area = design.core.valid() ? design.core.area() : 0;
  r.utilization = utilizationOf(r.stdcell_area, r.core_area);
  return r;
}

const nlohmann::json& schema()
{
  static const nlohmann::json doc = nlohmann::json::parse(kSchemaText);
  return doc;
}

std::vector<std::string> schemaErrors(const nlohmann::json& doc, bool strict)
{
  std::vector<std::string> errors;
  check(doc, schema(), "", strict, errors);
  if (errors.empty()) {
    const auto stdcell = doc["stdcell_area"].get<Area>();
    const auto core = doc["core_area"].get<Area>();
    const double util = doc["utilization"].get<double>();
    const double expect = utilizationOf(stdcell, core);
    if (std::abs(util - expect) > 1e-9 * std::max(1.0, expect)) {
      errors.push_back(fmt::format(
          "/utilization: {} differs from stdcell_area / core_area = {}", util, expect));
    }
  }
  return errors;
}

nlohmann::ordered_json toJson(const MetricsRecord& r)
{
  nlohmann::ordered_json j;
  j["schema"] = kSchemaId;
  j["design"] = r.design;
  j["stage"] = r.stage;
  j["flow"] = r.flow;
  j["enablement"] = orNull(r.enablement);
  j["units"] = r.units;
  j["wirelength_hpwl"] = r.wirelength_hpwl;
  j["wirelength_routed"] = orNull(r.wirelength_routed);
  j["instance_count"] = r.instance_count;
  j["net_count"] = r.net_count;
  j["pin_count"] = r.pin_count;
  j["stdcell_area"] = r.stdcell_area;
  j["core_area"] = r.core_area;
  j["utilization"] = r.utilization;
  j["cutsize"] = orNull(r.cutsize);
  j["hbt_estimate"] = orNull(r.hbt_estimate);
  j["runtime_s"] = r.runtime_s;
  j["memory_peak_kb"] = orNull(r.memory_peak_kb);
  j["violations"] = nlohmann::ordered_json::object();
  for (const auto& [code, n] : r.violations) {
    j["violations"][code] = n;
  }
  j["timing"] = {{"wns_ns", nullptr}, {"tns_ns", nullptr}, {"note", kTimingNote}};
  j["power"] = {{"total_mw", nullptr}, {"note", kPowerNote}};
  return j;
}

std::string emitMetrics(const MetricsRecord& record)
{
  const nlohmann::ordered_json j = toJson(record);
  const auto errors = schemaErrors(nlohmann::json::parse(j.dump()));
  if (!errors.empty()) {
    fail(Errc::kSchemaViolation, fmt::format("metrics record '{}': {}", record.design, errors.front()));
  }
  return j.dump(2) + "\n";
}

MetricsRecord parseMetrics(std::string_view text, bool strict)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kSchemaViolation, fmt::format("metrics: {}", e.what()));
  }
  const auto errors = schemaErrors(j, strict);
  if (!errors.empty()) {
    fail(Errc::kSchemaViolation, fmt::format("metrics: {}", errors.front()));
  }
  MetricsRecord r;
  r.design = j["design"].get<std::string>();
  r.stage = j["stage"].get<std::string>();
  r.flow = j["flow"].get<std::string>();
  r.enablement = optionalField<std::string>(j, "enablement");
  r.units = j["units"].get<int>();
  r.wirelength_hpwl = j["wirelength_hpwl"].get<Dbu>();
  r.wirelength_routed = optionalField<Dbu>(j, "wirelength_routed");
  r.instance_count = j["instance_count"].get<std::int64_t>();
  r.net_count = j["net_count"].get<std::int64_t>();
  r.pin_count = j["pin_count"].get<std::int64_t>();
  r.stdcell_area = j["stdcell_area"].get<Area>();
  r.core_area = j["core_area"].get<Area>();
  r.utilization = j["utilization"].get<double>();
  r.cutsize = optionalField<double>(j, "cutsize");
  r.hbt_estimate = optionalField<std::int64_t>(j, "hbt_estimate");
  r.runtime_s = j["runtime_s"].get<double>();
  r.memory_peak_kb = optionalField<std::int64_t>(j, "memory_peak_kb");
  for (const auto& [code, n] : j["violations"].items()) {
    r.violations[code] = n.get<std::int64_t>();
  }
  return r;
}

std::string compareRuns(std::span<const MetricsRecord> records)
{
  std::vector<const MetricsRecord*> rows;
  for (const MetricsRecord& r : records) {
    rows.push_back(&r);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsRecord* a, const MetricsRecord* b) {
    return std::tie(a->design, a->flow, a->stage) < std::tie(b->design, b->flow, b->stage);
  });
  std::string out
      = "Design,Flow,Stage,Enablement,Clock_ns,Core_um2,StdCell_um2,Util,Power_mW,rWL_mm,"
        "HPWL_mm,WNS_ns,TNS_ns,DRVs,FEPs,Cutsize,HBT,Instances,Nets,Pins,Runtime_s,"
        "Violations\n";
  for (const MetricsRecord* r : rows) {
    const double u = r->units;
    auto um2 = [u](Area a) { return formatDouble(static_cast<double>(a) / (u * u)); };
    auto mm = [u](Dbu d) { return formatDouble(static_cast<double>(d) / u / 1000.0); };
    std::int64_t violations = 0;
    for (const auto& [code, n] : r->violations) {
      violations += n;
    }
    out += fmt::format("{},{},{},{},,{},{},{},,{},{},,,,,{},{},{},{},{},{},{}\n",
                       csvField(r->design),
                       csvField(r->flow),
                       csvField(r->stage),
                       csvField(r->enablement.value_or("")),
                       um2(r->core_area),
                       um2(r->stdcell_area),
                       formatDouble(r->utilization),
                       r->wirelength_routed ? mm(*r->wirelength_routed) : "",
                       mm(r->wirelength_hpwl),
                       r->cutsize ? formatDouble(*r->cutsize) : "",
                       r->hbt_estimate ? std::to_string(*r->hbt_estimate) : "",
                       r->instance_count,
                       r->net_count,
                       r->pin_count,
                       formatDouble(r->runtime_s),
                       violations);
  }
  return out;
}

std::optional<std::int64_t> peakRssKb()
{
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(usage.ru_maxrss);
}

}  // namespace rpd::metrics
