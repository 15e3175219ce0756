#include "slowlight/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "slowlight/errors.hpp"

namespace slowlight {

namespace {

enum class KeyKind { Number, String, List };

struct KeyInfo {
  KeyKind kind;
  const char* default_value;
  double min;  // inclusive, numbers only
  double max;  // inclusive
  const char* description;
};

constexpr double kInf = 1e300;

// clang-format off
const std::map<std::string, KeyInfo>& schema() {
  static const std::map<std::string, KeyInfo> s = {
    {"scenario",                 {KeyKind::String, "", 0, 0, "one of: slowlight, switch, detuning-sweep, transient, intensity-sweep"}},
    {"seed",                     {KeyKind::Number, "0", 0, kInf, "random seed for optional synthetic noise"}},
    {"init.rho11",               {KeyKind::Number, "0", 0, 1, "initial population of level 1"}},
    {"init.rho22",               {KeyKind::Number, "1", 0, 1, "initial population of level 2 (1: ideal repump, 0.3333...: thermal)"}},
    {"init.rho33",               {KeyKind::Number, "0", 0, 1, "initial population of level 3"}},
    {"relax.G25_kHz",            {KeyKind::Number, "1", 0, kInf, "population decay 5->2"}},
    {"relax.G35_kHz",            {KeyKind::Number, "1", 0, kInf, "population decay 5->3"}},
    {"relax.g25_kHz",            {KeyKind::Number, "50", 0, kInf, "total transverse decay of the 2-5 coherence"}},
    {"relax.g35_kHz",            {KeyKind::Number, "50", 0, kInf, "total transverse decay of the 3-5 coherence"}},
    {"relax.g23_kHz",            {KeyKind::Number, "98", 0, kInf, "total transverse decay of the 2-3 coherence (default: sum of the optical pure-dephasing rates, the largest value compatible with a completely positive dephasing model)"}},
    {"rabi.P_kHz",               {KeyKind::Number, "10", 0, kInf, "probe Rabi frequency (overrides the intensity calibration)"}},
    {"rabi.A_kHz",               {KeyKind::Number, "100", 0, kInf, "control Rabi frequency (overrides the intensity calibration)"}},
    {"calib.P_kHz_per_sqrtWcm2", {KeyKind::Number, "5.773502691896258", 1e-12, kInf, "probe transition coupling constant"}},
    {"calib.A_kHz_per_sqrtWcm2", {KeyKind::Number, "31.62277660168379", 1e-12, kInf, "control transition coupling constant"}},
    {"intensity.P_Wcm2",         {KeyKind::Number, "3", 0, kInf, "probe peak intensity"}},
    {"intensity.A_Wcm2",         {KeyKind::Number, "10", 0, kInf, "control intensity"}},
    {"probe.fwhm_us",            {KeyKind::Number, "10", 1e-12, kInf, "probe intensity-profile FWHM (pulse length)"}},
    {"probe.detuning_kHz",       {KeyKind::Number, "0", -kInf, kInf, "probe carrier detuning from the hole center"}},
    {"control.duration_us",      {KeyKind::Number, "50", 1e-12, kInf, "control pulse length (rectangular)"}},
    {"control.detuning_MHz",     {KeyKind::Number, "0", -kInf, kInf, "control detuning delta"}},
    {"control.start_us",         {KeyKind::Number, "nan", -kInf, kInf, "control turn-on time (default: scenario-dependent)"}},
    {"hole.D",                   {KeyKind::Number, "10", 0, kInf, "background optical depth alpha0*L"}},
    {"hole.d",                   {KeyKind::Number, "0.8", 0, 1, "fractional hole depth"}},
    {"hole.fwhm_kHz",            {KeyKind::Number, "600", 1e-12, kInf, "hole FWHM (default 2x the 300 kHz laser jitter)"}},
    {"hole.center_kHz",          {KeyKind::Number, "0", -kInf, kInf, "hole center relative to the probe carrier"}},
    {"grid.span_factor",         {KeyKind::Number, "40", 10, kInf, "spectral grid span in units of the hole FWHM"}},
    {"grid.points_per_fwhm",     {KeyKind::Number, "50", 50, kInf, "grid resolution"}},
    {"od.eff",                   {KeyKind::Number, "-1", -1, kInf, "optical depth for the switching stage (-1: residual depth D*(1-d))"}},
    {"sim.sample_step_us",       {KeyKind::Number, "0.05", 1e-9, kInf, "output sample step"}},
    {"sim.rtol",                 {KeyKind::Number, "1e-8", 1e-15, 1, "integrator relative tolerance"}},
    {"sim.atol",                 {KeyKind::Number, "1e-10", 1e-18, 1, "integrator absolute tolerance"}},
    {"sim.t0_us",                {KeyKind::Number, "nan", -kInf, kInf, "evolution start (default: auto)"}},
    {"sim.t1_us",                {KeyKind::Number, "nan", -kInf, kInf, "evolution end (default: auto)"}},
    {"sweep.detunings_MHz",      {KeyKind::List, "0,0.5,1,2", -kInf, kInf, "control detunings for detuning-sweep"}},
    {"sweep.intensities_Wcm2",   {KeyKind::List, "2,4,6,8,10,12,14,16,18,20", 0, kInf, "control intensities for intensity-sweep"}},
  };
  return s;
}
// clang-format on

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "slowlight", "switch", "detuning-sweep", "transient", "intensity-sweep"};
  return names;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError(where + ": '" + v + "' is not a number");
  }
}

}  // namespace

void Config::validate_key(const std::string& key, const std::string& value,
                          const std::string& where) const {
  const auto it = schema().find(key);
  if (it == schema().end())
    throw ValidationError(where + ": unknown key '" + key + "'");
  const KeyInfo& info = it->second;
  switch (info.kind) {
    case KeyKind::Number: {
      const double x = parse_number(value, where + ": key '" + key + "'");
      if (!std::isnan(x) && (x < info.min || x > info.max))
        throw ValidationError(where + ": key '" + key + "' = " + value +
                              " is out of range");
      break;
    }
    case KeyKind::List: {
      std::stringstream ss(value);
      std::string item;
      int count = 0;
      while (std::getline(ss, item, ',')) {
        const double x =
            parse_number(trim(item), where + ": key '" + key + "'");
        if (x < info.min || x > info.max)
          throw ValidationError(where + ": key '" + key +
                                "' holds an out-of-range value");
        ++count;
      }
      if (count == 0)
        throw ValidationError(where + ": key '" + key + "' is an empty list");
      break;
    }
    case KeyKind::String: {
      if (key == "scenario") {
        for (const auto& n : scenario_names())
          if (n == value) return;
        throw ValidationError(where + ": unrecognized scenario '" + value + "'");
      }
      break;
    }
  }
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string::npos)
      throw ValidationError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(where + ": empty key");
    cfg.validate_key(key, value, where);
    if (cfg.explicit_.count(key))
      throw ValidationError(where + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
    cfg.explicit_[key] = true;
  }
  if (!cfg.explicit_.count("scenario"))
    throw ValidationError(origin + ": missing required key 'scenario'");
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

double Config::number(const std::string& key) const {
  const auto it = schema().find(key);
  if (it == schema().end() || it->second.kind == KeyKind::List)
    throw ValidationError("internal: bad numeric key '" + key + "'");
  const auto v = values_.find(key);
  const std::string& raw =
      v != values_.end() ? v->second : std::string(it->second.default_value);
  return parse_number(raw, "key '" + key + "'");
}

std::string Config::str(const std::string& key) const {
  const auto it = schema().find(key);
  if (it == schema().end())
    throw ValidationError("internal: unknown key '" + key + "'");
  const auto v = values_.find(key);
  return v != values_.end() ? v->second : it->second.default_value;
}

std::vector<double> Config::list(const std::string& key) const {
  const auto it = schema().find(key);
  if (it == schema().end() || it->second.kind != KeyKind::List)
    throw ValidationError("internal: bad list key '" + key + "'");
  const auto v = values_.find(key);
  const std::string raw =
      v != values_.end() ? v->second : std::string(it->second.default_value);
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_number(trim(item), "key '" + key + "'"));
  return out;
}

bool Config::is_set(const std::string& key) const {
  return explicit_.count(key) > 0;
}

void Config::override_value(const std::string& key, const std::string& value) {
  validate_key(key, value, "override");
  values_[key] = value;
  explicit_[key] = true;
}

std::string Config::schema_help() {
  std::ostringstream out;
  for (const auto& [key, info] : schema()) {
    out << key;
    if (info.default_value[0] != '\0') out << " = " << info.default_value;
    out << "\n    " << info.description << "\n";
  }
  return out.str();
}

}  // namespace slowlight
