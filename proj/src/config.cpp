#include "pump/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pump/errors.hpp"

namespace pump {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse '" + value + "' as an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "': cannot parse '" + value + "' as an unsigned integer");
  }
}

/// Shortest decimal that parses back to the same double.
std::string config_double(double v) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw config_error("key '" + key + "': empty list");
  return out;
}

const std::map<std::string, ScheduleKind> kScheduleNames = {
    {"linear", ScheduleKind::Linear}, {"gap-adaptive", ScheduleKind::GapAdaptive}};
const std::map<std::string, DisorderKind> kDisorderNames = {
    {"none", DisorderKind::None}, {"uniform", DisorderKind::Uniform}, {"normal", DisorderKind::Normal}};
const std::map<std::string, PropagatorMethod> kMethodNames = {
    {"midpoint-exp", PropagatorMethod::MidpointExponential}, {"rk4", PropagatorMethod::RK4}};
const std::map<std::string, OutputFormat> kFormatNames = {
    {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}, {"svg", OutputFormat::Svg}};

template <typename T>
T lookup(const std::map<std::string, T>& names, const std::string& key, const std::string& value) {
  const auto it = names.find(value);
  if (it == names.end()) throw config_error("key '" + key + "': unknown value '" + value + "'");
  return it->second;
}

template <typename T>
std::string reverse_lookup(const std::map<std::string, T>& names, T value) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

const char* kSections[] = {"model", "schedule", "disorder", "run", "integrator", "output"};

}  // namespace

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::FockPump: return "pump-fock";
    case ExperimentKind::SinglePump: return "pump-single";
    case ExperimentKind::DisorderScan: return "scan-disorder";
    case ExperimentKind::Hom: return "hom";
    case ExperimentKind::FullProtocol: return "full-protocol";
    case ExperimentKind::ChernCheck: return "chern";
  }
  return "?";
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
  for (ExperimentKind kind :
       {ExperimentKind::FockPump, ExperimentKind::SinglePump, ExperimentKind::DisorderScan,
        ExperimentKind::Hom, ExperimentKind::FullProtocol, ExperimentKind::ChernCheck}) {
    if (experiment_kind_name(kind) == name) return kind;
  }
  throw config_error("unknown experiment '" + name + "'");
}

RunConfig default_config(ExperimentKind kind) {
  RunConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::FockPump:
      c.disorder = DisorderKind::Uniform;
      c.eta = 4.0;
      break;
    case ExperimentKind::SinglePump:
      c.samples = 1;
      break;
    case ExperimentKind::DisorderScan:
      c.disorder = DisorderKind::Uniform;
      break;
    case ExperimentKind::Hom:
      c.schedule = ScheduleKind::GapAdaptive;
      c.phi0 = M_PI_2;
      c.disorder = DisorderKind::Uniform;
      c.eta = 0.5;
      c.start = 9;
      c.start2 = 10;
      break;
    case ExperimentKind::FullProtocol:
      c.schedule = ScheduleKind::GapAdaptive;
      c.disorder = DisorderKind::Uniform;
      c.eta = 0.5;
      c.start = 7;
      c.start2 = 12;
      break;
    case ExperimentKind::ChernCheck:
      break;
  }
  return c;
}

void apply_config_key(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    const ExperimentKind kind = experiment_kind_from_name(value);
    if (kind != config.experiment) {
      throw config_error("config file is for experiment '" + value + "', expected '" +
                         experiment_kind_name(config.experiment) + "'");
    }
  } else if (key == "J") {
    config.J = parse_double(key, value);
  } else if (key == "L") {
    config.L = static_cast<int>(parse_int(key, value));
  } else if (key == "Delta0") {
    config.Delta0 = parse_double(key, value);
  } else if (key == "delta0") {
    config.delta0 = parse_double(key, value);
  } else if (key == "phi0") {
    config.phi0 = parse_double(key, value);
  } else if (key == "schedule") {
    config.schedule = lookup(kScheduleNames, key, value);
  } else if (key == "omega") {
    config.omega = parse_double(key, value);
  } else if (key == "epsilon") {
    config.epsilon = parse_double(key, value);
  } else if (key == "disorder") {
    config.disorder = lookup(kDisorderNames, key, value);
  } else if (key == "eta") {
    config.eta = parse_double(key, value);
  } else if (key == "mu") {
    config.mu = parse_double(key, value);
  } else if (key == "sigma") {
    config.sigma = parse_double(key, value);
  } else if (key == "samples") {
    config.samples = static_cast<int>(parse_int(key, value));
  } else if (key == "start") {
    config.start = static_cast<int>(parse_int(key, value));
  } else if (key == "start2") {
    config.start2 = static_cast<int>(parse_int(key, value));
  } else if (key == "cycles") {
    config.cycles = static_cast<int>(parse_int(key, value));
  } else if (key == "sample_times") {
    config.sample_times = static_cast<int>(parse_int(key, value));
  } else if (key == "base_seed") {
    config.base_seed = parse_u64(key, value);
  } else if (key == "amplitudes") {
    config.amplitudes = parse_double_list(key, value);
  } else if (key == "grid_k") {
    config.grid_k = static_cast<int>(parse_int(key, value));
  } else if (key == "grid_t") {
    config.grid_t = static_cast<int>(parse_int(key, value));
  } else if (key == "steps_per_cycle") {
    config.steps_per_cycle = static_cast<int>(parse_int(key, value));
  } else if (key == "method") {
    config.method = lookup(kMethodNames, key, value);
  } else if (key == "tolerance") {
    config.tolerance = parse_double(key, value);
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else if (key == "formats") {
    std::vector<OutputFormat> formats;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const OutputFormat f = lookup(kFormatNames, key, item);
      if (std::find(formats.begin(), formats.end(), f) == formats.end()) formats.push_back(f);
    }
    if (formats.empty()) throw config_error("key 'formats': empty list");
    config.formats = formats;
  } else if (key == "workers") {
    config.workers = static_cast<int>(parse_int(key, value));
  } else {
    throw config_error("unknown config key '" + key + "'");
  }
}

RunConfig parse_config_text(const std::string& text, ExperimentKind kind) {
  RunConfig config = default_config(kind);
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error("line " + std::to_string(line_no) + ": bad section header");
      const std::string section = trim(line.substr(1, line.size() - 2));
      if (std::find_if(std::begin(kSections), std::end(kSections),
                       [&](const char* s) { return section == s; }) == std::end(kSections)) {
        throw config_error("line " + std::to_string(line_no) + ": unknown section '" + section + "'");
      }
      continue;  // sections only group keys visually
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    apply_config_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

RunConfig parse_config_file(const std::string& path, ExperimentKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), kind);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "experiment = " << experiment_kind_name(c.experiment) << "\n";
  out << "\n[model]\n";
  out << "J = " << config_double(c.J) << "\n";
  out << "L = " << c.L << "\n";
  out << "Delta0 = " << config_double(c.Delta0) << "\n";
  out << "delta0 = " << config_double(c.delta0) << "\n";
  out << "phi0 = " << config_double(c.phi0) << "\n";
  out << "\n[schedule]\n";
  out << "schedule = " << reverse_lookup(kScheduleNames, c.schedule) << "\n";
  out << "omega = " << config_double(c.omega) << "\n";
  out << "epsilon = " << config_double(c.epsilon) << "\n";
  out << "\n[disorder]\n";
  out << "disorder = " << reverse_lookup(kDisorderNames, c.disorder) << "\n";
  out << "eta = " << config_double(c.eta) << "\n";
  out << "mu = " << config_double(c.mu) << "\n";
  out << "sigma = " << config_double(c.sigma) << "\n";
  out << "\n[run]\n";
  out << "samples = " << c.samples << "\n";
  out << "start = " << c.start << "\n";
  out << "start2 = " << c.start2 << "\n";
  out << "cycles = " << c.cycles << "\n";
  out << "sample_times = " << c.sample_times << "\n";
  out << "base_seed = " << c.base_seed << "\n";
  out << "amplitudes = ";
  for (std::size_t i = 0; i < c.amplitudes.size(); ++i) {
    out << (i ? "," : "") << config_double(c.amplitudes[i]);
  }
  out << "\n";
  out << "grid_k = " << c.grid_k << "\n";
  out << "grid_t = " << c.grid_t << "\n";
  out << "\n[integrator]\n";
  out << "steps_per_cycle = " << c.steps_per_cycle << "\n";
  out << "method = " << reverse_lookup(kMethodNames, c.method) << "\n";
  out << "tolerance = " << config_double(c.tolerance) << "\n";
  out << "\n[output]\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "formats = ";
  for (std::size_t i = 0; i < c.formats.size(); ++i) {
    out << (i ? "," : "") << reverse_lookup(kFormatNames, c.formats[i]);
  }
  out << "\n";
  out << "workers = " << c.workers << "\n";
  return out.str();
}

ExperimentSpec RunConfig::experiment_spec() const {
  ExperimentSpec spec;
  spec.kind = experiment;
  spec.params.J = J;
  spec.params.L = L;
  spec.params.Delta0 = Delta0;
  spec.params.delta0 = delta0;
  spec.params.phi0 = phi0;
  spec.schedule.kind = schedule;
  spec.schedule.rate = schedule == ScheduleKind::Linear ? omega : epsilon;
  spec.disorder.kind = disorder;
  spec.disorder.eta = eta;
  spec.disorder.mu = mu;
  spec.disorder.sigma = sigma;
  spec.disorder.base_seed = base_seed;
  spec.n_samples = samples;
  spec.start_site = start;
  spec.start_site2 = start2;
  spec.n_records = sample_times;
  spec.n_cycles = cycles;
  spec.prop.steps_per_cycle = steps_per_cycle;
  spec.prop.method = method;
  spec.prop.tolerance = tolerance;
  if (experiment != ExperimentKind::ChernCheck) spec.validate();
  return spec;
}

}  // namespace pump
