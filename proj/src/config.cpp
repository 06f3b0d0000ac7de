#include "modsi/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "modsi/errors.hpp"

namespace modsi {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double number(const json& v, const std::string& key) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "none") return std::numeric_limits<double>::infinity();
  }
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

std::size_t count_of(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("'" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

template <class T, class F>
void optional(const json& obj, const char* key, T& out, F convert) {
  if (obj.contains(key)) out = convert(obj.at(key), key);
}

Generator parse_generator(const json& g, const std::filesystem::path& base) {
  if (!g.is_object() || !g.contains("kind")) throw ConfigError("generator: expected an object with 'kind'");
  const auto kind = g.at("kind").get<std::string>();
  if (kind == "lorentzian") {
    check_keys(g, "generator", {"kind", "gamma"});
    return Generator::lorentzian(number(g.value("gamma", json(0.5)), "gamma"));
  }
  if (kind == "bspline") {
    check_keys(g, "generator", {"kind", "order", "scale"});
    return Generator::bspline(static_cast<int>(count_of(g.value("order", json(1)), "order")),
                              number(g.value("scale", json(1.0)), "scale"));
  }
  if (kind == "sinc") {
    check_keys(g, "generator", {"kind", "bandwidth"});
    if (!g.contains("bandwidth")) throw ConfigError("generator: sinc needs 'bandwidth' (rad/s)");
    return Generator::sinc(number(g.at("bandwidth"), "bandwidth"));
  }
  if (kind == "tabulated") {
    check_keys(g, "generator", {"kind", "path", "dt", "skip_header", "column"});
    if (!g.contains("path")) throw ConfigError("generator: tabulated needs 'path'");
    const double dt = number(g.value("dt", json(1e-3)), "dt");
    LoadOptions lo;
    lo.sample_rate = 1.0 / dt;
    lo.skip_header = g.value("skip_header", false);
    lo.column = count_of(g.value("column", json(0)), "column");
    std::filesystem::path p = g.at("path").get<std::string>();
    if (p.is_relative()) p = base / p;
    auto rec = load_recording(p, lo);
    return Generator::tabulated(FineSignal(0.0, dt, std::move(rec.values)));
  }
  throw ConfigError("generator: unknown kind '" + kind + "'");
}

std::optional<MixerSpec> parse_mixer(const json& m, double T) {
  if (m.is_null()) return std::nullopt;
  check_keys(m, "mixer", {"dc", "cos", "coeffs"});
  if (m.contains("coeffs")) {
    if (m.contains("cos") || m.contains("dc")) throw ConfigError("mixer: give either 'coeffs' or 'dc'/'cos'");
    std::map<int, std::complex<double>> c;
    for (const auto& e : m.at("coeffs")) {
      check_keys(e, "mixer.coeffs", {"l", "re", "im"});
      c[e.at("l").get<int>()] = {number(e.value("re", json(0.0)), "re"), number(e.value("im", json(0.0)), "im")};
    }
    return MixerSpec(T, std::move(c));
  }
  std::vector<std::pair<int, double>> terms;
  if (m.contains("cos"))
    for (const auto& e : m.at("cos")) {
      check_keys(e, "mixer.cos", {"harmonic", "amp"});
      terms.emplace_back(e.at("harmonic").get<int>(), number(e.at("amp"), "amp"));
    }
  return MixerSpec::from_cosines(T, number(m.value("dc", json(0.0)), "dc"), terms);
}

UnfoldMethod parse_method(const json& v) {
  const auto s = v.get<std::string>();
  if (s == "hod") return UnfoldMethod::higher_order_difference;
  if (s == "itoh") return UnfoldMethod::itoh;
  throw ConfigError("unfolder: unknown method '" + s + "' (expected hod or itoh)");
}

void parse_hod(const json& obj, HodOptions& hod) {
  if (obj.contains("order")) hod.order = static_cast<int>(count_of(obj.at("order"), "order"));
  if (obj.contains("slack")) hod.slack = number(obj.at("slack"), "slack");
  if (obj.contains("amplitude_bound")) hod.amplitude_bound = number(obj.at("amplitude_bound"), "amplitude_bound");
}

void parse_ecg(const json& e, EcgOptions& o, PulseTrainDefaults& train) {
  check_keys(e, "ecg",
             {"T", "lambda_rel", "oversampling", "bands", "order", "average_alias_bands", "threshold", "snr_db", "seed",
              "window_periods"});
  optional(e, "T", train.T, number);
  optional(e, "window_periods", train.window_periods, count_of);
  optional(e, "lambda_rel", o.lambda_rel, number);
  optional(e, "oversampling", o.oversampling, count_of);
  if (e.contains("bands")) o.bands = static_cast<int>(count_of(e.at("bands"), "bands"));
  if (e.contains("order")) o.order = static_cast<int>(count_of(e.at("order"), "order"));
  if (e.contains("average_alias_bands")) o.average_alias_bands = e.at("average_alias_bands").get<bool>();
  optional(e, "threshold", o.threshold, number);
  optional(e, "snr_db", o.snr_db, number);
  if (e.contains("seed")) o.seed = e.at("seed").get<std::uint64_t>();
  if (!(train.T > 0.0) || o.oversampling < 1 || o.bands < 1 || o.order < 1 || !(o.lambda_rel > 0.0))
    throw ConfigError("ecg: T, oversampling, bands, order and lambda_rel must be positive");
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "config",
             {"schema", "description", "generator", "T", "count", "coefficient_range", "lambda", "oversampling",
              "refinement", "pad", "mixer", "unfolder", "order", "slack", "amplitude_bound", "snr_db", "trials", "seed",
              "epsilon", "interior_drop", "noise_stage", "ecg"});

  RunConfig rc;
  auto& c = rc.sweep;
  try {
    if (doc.contains("schema") && doc.at("schema").get<int>() != kConfigSchemaVersion)
      throw ConfigError("unsupported config schema " + doc.at("schema").dump() + " (this build reads " +
                        std::to_string(kConfigSchemaVersion) + ")");
    optional(doc, "T", c.T, number);
    if (doc.contains("generator")) c.generator = parse_generator(doc.at("generator"), base_dir);
    optional(doc, "count", c.count, count_of);
    if (doc.contains("coefficient_range")) {
      const auto& r = doc.at("coefficient_range");
      if (!r.is_array() || r.size() != 2) throw ConfigError("'coefficient_range' must be [low, high]");
      c.coeff_low = number(r[0], "coefficient_range");
      c.coeff_high = number(r[1], "coefficient_range");
    }
    optional(doc, "lambda", c.lambda, number);
    optional(doc, "oversampling", c.oversampling, count_of);
    optional(doc, "refinement", c.refinement, count_of);
    if (doc.contains("pad")) {
      const auto& p = doc.at("pad");
      if (p.is_array()) {
        if (p.size() != 2) throw ConfigError("'pad' must be a count or [left, right]");
        c.pad_left = count_of(p[0], "pad");
        c.pad_right = count_of(p[1], "pad");
      } else {
        c.pad_left = c.pad_right = count_of(p, "pad");
      }
    }
    if (doc.contains("mixer")) c.mixer = parse_mixer(doc.at("mixer"), c.T);
    if (doc.contains("unfolder")) {
      const auto& u = doc.at("unfolder");
      if (u.is_string()) {
        c.unfolder.method = parse_method(u);
      } else {
        check_keys(u, "unfolder", {"unfolder", "order", "slack", "amplitude_bound"});
        if (u.contains("unfolder")) c.unfolder.method = parse_method(u.at("unfolder"));
        parse_hod(u, c.unfolder.hod);
      }
    }
    parse_hod(doc, c.unfolder.hod);
    if (doc.contains("snr_db")) {
      c.snr_db.clear();
      const auto& s = doc.at("snr_db");
      if (!s.is_array()) throw ConfigError("'snr_db' must be a list");
      for (const auto& v : s) c.snr_db.push_back(number(v, "snr_db"));
    }
    optional(doc, "trials", c.trials, count_of);
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    optional(doc, "epsilon", c.epsilon, number);
    optional(doc, "interior_drop", c.interior_drop, count_of);
    if (doc.contains("noise_stage")) {
      const auto s = doc.at("noise_stage").get<std::string>();
      if (s == "post_fold")
        c.noise_stage = NoiseStage::post_fold;
      else if (s == "pre_fold")
        c.noise_stage = NoiseStage::pre_fold;
      else
        throw ConfigError("'noise_stage' must be post_fold or pre_fold");
    }
    if (doc.contains("ecg")) parse_ecg(doc.at("ecg"), rc.ecg, rc.ecg_train);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace modsi
