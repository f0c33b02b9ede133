#include "twinbeam/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "twinbeam/errors.hpp"

namespace twinbeam {

void SweepSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi))
    throw ConfigError("sweep: range must be finite and ordered");
  if (points < 1) throw ConfigError("sweep: points must be >= 1");
}

void RunConfig::validate() const {
  crystal.validate();
  pump.validate();
  sweep.validate();
  if (grid.n_points < 64) throw ConfigError("grid: n_points must be >= 64");
  if (!(grid.span_lobes >= 2.0))
    throw ConfigError("grid: span_lobes must be >= 2");
  if (!(gain >= 0.0)) throw ConfigError("run: gain must be >= 0");
  if (!(brightness_a > 0.0)) throw ConfigError("run: brightness_a must be > 0");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& where) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an unsigned integer, got '" + value +
                      "'");
  }
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& origin) {
  RunConfig cfg;
  std::string line, section;
  int line_no = 0;

  auto where = [&](const std::string& key) {
    std::ostringstream os;
    os << origin << ":" << line_no << " [" << section << "] " << key;
    return os.str();
  };

  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ": malformed section at line " +
                          std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "crystal" && section != "pump" && section != "grid" &&
          section != "sweep" && section != "run")
        throw ConfigError(origin + ": unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ": expected key = value at line " +
                        std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string ctx = where(key);

    if (section == "crystal") {
      auto& c = cfg.crystal;
      auto& s = c.sellmeier;
      if (key == "poling_period_um") c.poling_period_um = parse_double(value, ctx);
      else if (key == "length_mm") c.length_mm = parse_double(value, ctx);
      else if (key == "temperature_k") c.temperature_k = parse_double(value, ctx);
      else if (key == "sellmeier_a1") s.a1 = parse_double(value, ctx);
      else if (key == "sellmeier_a2") s.a2 = parse_double(value, ctx);
      else if (key == "sellmeier_a3") s.a3 = parse_double(value, ctx);
      else if (key == "sellmeier_a4") s.a4 = parse_double(value, ctx);
      else if (key == "sellmeier_a5") s.a5 = parse_double(value, ctx);
      else if (key == "sellmeier_a6") s.a6 = parse_double(value, ctx);
      else if (key == "sellmeier_b1") s.b1 = parse_double(value, ctx);
      else if (key == "sellmeier_b2") s.b2 = parse_double(value, ctx);
      else if (key == "sellmeier_b3") s.b3 = parse_double(value, ctx);
      else if (key == "sellmeier_b4") s.b4 = parse_double(value, ctx);
      else if (key == "sellmeier_t_room_k") s.t_room_k = parse_double(value, ctx);
      else throw ConfigError(ctx + ": unknown key");
    } else if (section == "pump") {
      auto& p = cfg.pump;
      if (key == "center_wavelength_um")
        p.center_wavelength_um = parse_double(value, ctx);
      else if (key == "tau_fwhm_fs") p.tau_fwhm_fs = parse_double(value, ctx);
      else if (key == "gdd_fs2") p.gdd_fs2 = parse_double(value, ctx);
      else if (key == "pulse_energy_j")
        p.pulse_energy_j = parse_double(value, ctx);
      else throw ConfigError(ctx + ": unknown key");
    } else if (section == "grid") {
      if (key == "n_points")
        cfg.grid.n_points = static_cast<int>(parse_u64(value, ctx));
      else if (key == "span_lobes") cfg.grid.span_lobes = parse_double(value, ctx);
      else throw ConfigError(ctx + ": unknown key");
    } else if (section == "sweep") {
      if (key == "variable") {
        if (value == "gdd") cfg.sweep.variable = SweepSpec::Variable::Gdd;
        else if (value == "pump_power")
          cfg.sweep.variable = SweepSpec::Variable::PumpPower;
        else throw ConfigError(ctx + ": expected gdd or pump_power");
      } else if (key == "lo") cfg.sweep.lo = parse_double(value, ctx);
      else if (key == "hi") cfg.sweep.hi = parse_double(value, ctx);
      else if (key == "points")
        cfg.sweep.points = static_cast<int>(parse_u64(value, ctx));
      else throw ConfigError(ctx + ": unknown key");
    } else if (section == "run") {
      if (key == "gain") cfg.gain = parse_double(value, ctx);
      else if (key == "brightness_a") cfg.brightness_a = parse_double(value, ctx);
      else if (key == "seed") cfg.seed = parse_u64(value, ctx);
      else throw ConfigError(ctx + ": unknown key");
    } else {
      throw ConfigError(origin + ": key outside any section at line " +
                        std::to_string(line_no));
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  return parse_config(f, path);
}

std::string config_hash(const RunConfig& cfg) {
  char buf[64];
  std::string canon;
  auto add = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s=%.17g;", key, v);
    canon += buf;
  };
  const auto& s = cfg.crystal.sellmeier;
  add("poling", cfg.crystal.poling_period_um);
  add("length", cfg.crystal.length_mm);
  add("temp", cfg.crystal.temperature_k);
  add("a1", s.a1); add("a2", s.a2); add("a3", s.a3);
  add("a4", s.a4); add("a5", s.a5); add("a6", s.a6);
  add("b1", s.b1); add("b2", s.b2); add("b3", s.b3); add("b4", s.b4);
  add("troom", s.t_room_k);
  add("lambda0", cfg.pump.center_wavelength_um);
  add("tau", cfg.pump.tau_fwhm_fs);
  add("gdd", cfg.pump.gdd_fs2);
  add("energy", cfg.pump.pulse_energy_j.value_or(0.0));
  add("npoints", cfg.grid.n_points);
  add("lobes", cfg.grid.span_lobes);
  add("svar", cfg.sweep.variable == SweepSpec::Variable::Gdd ? 0.0 : 1.0);
  add("slo", cfg.sweep.lo);
  add("shi", cfg.sweep.hi);
  add("spts", cfg.sweep.points);
  add("gain", cfg.gain);
  add("a", cfg.brightness_a);
  std::snprintf(buf, sizeof buf, "seed=%llu;",
                static_cast<unsigned long long>(cfg.seed));
  canon += buf;

  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (const char c : canon) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace twinbeam
