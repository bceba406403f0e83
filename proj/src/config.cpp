// SPDX-License-Identifier: Apache-2.0

#include "dgrd/config.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dgrd/common.hpp"

namespace dgrd {

namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (trim(value.substr(pos)).empty()) {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw invalid_input("config: key '" + key + "' expects a number, got '" +
                      value + "'");
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (trim(value.substr(pos)).empty()) {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw invalid_input("config: key '" + key + "' expects an integer, got '" +
                      value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (trim(value.substr(pos)).empty()) {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw invalid_input("config: key '" + key +
                      "' expects a nonnegative integer, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "0" || value == "false") {
    return false;
  }
  if (value == "1" || value == "true") {
    return true;
  }
  throw invalid_input("config: key '" + key + "' expects 0/1/true/false, got '" +
                      value + "'");
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) {
    out.push_back(tok);
  }
  return out;
}

CoefficientSpec parse_coefficient(const std::string& value) {
  const std::vector<std::string> tok = split_ws(value);
  if (tok.empty()) {
    throw invalid_input("config: key 'coefficient' expects a kind");
  }
  CoefficientSpec spec;
  spec.kind = tok[0];
  if (tok[0] == "constant") {
    if (tok.size() > 2) {
      throw invalid_input("config: 'constant' takes one value");
    }
    if (tok.size() == 2) {
      spec.a = parse_double("coefficient", tok[1]);
    }
  } else if (tok[0] == "checkerboard" || tok[0] == "quadrant") {
    if (tok.size() != 3) {
      throw invalid_input("config: '" + tok[0] + "' takes two values");
    }
    spec.a = parse_double("coefficient", tok[1]);
    spec.b = parse_double("coefficient", tok[2]);
  } else if (tok[0] == "one_plus_x2") {
    if (tok.size() != 1) {
      throw invalid_input("config: 'one_plus_x2' takes no values");
    }
  } else {
    throw invalid_input("config: unknown coefficient kind '" + tok[0] + "'");
  }
  return spec;
}

} // namespace

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "schema_version") {
    config.schema_version = static_cast<int>(parse_int(key, value));
    if (config.schema_version != 1) {
      throw invalid_input("config: unsupported schema_version '" + value +
                          "' (expected 1)");
    }
  } else if (key == "domain") {
    const std::vector<std::string> tok = split_ws(value);
    if (tok.size() != 4) {
      throw invalid_input("config: 'domain' expects xmin ymin xmax ymax");
    }
    config.domain = {parse_double(key, tok[0]), parse_double(key, tok[1]),
                     parse_double(key, tok[2]), parse_double(key, tok[3])};
  } else if (key == "nx") {
    config.nx = static_cast<int>(parse_int(key, value));
  } else if (key == "ny") {
    config.ny = static_cast<int>(parse_int(key, value));
  } else if (key == "p") {
    config.p = static_cast<int>(parse_int(key, value));
  } else if (key == "degrees") {
    config.degrees.clear();
    for (const std::string& t : split_ws(value)) {
      config.degrees.push_back(static_cast<int>(parse_int(key, t)));
    }
    if (config.degrees.empty()) {
      throw invalid_input("config: 'degrees' expects at least one entry");
    }
  } else if (key == "quad_order") {
    config.quad_order = static_cast<int>(parse_int(key, value));
  } else if (key == "sigma") {
    config.params.sigma = parse_double(key, value);
  } else if (key == "lambda") {
    config.params.lambda = parse_double(key, value);
  } else if (key == "zeta") {
    config.params.zeta = parse_double(key, value);
  } else if (key == "nu") {
    config.params.nu = parse_double(key, value);
  } else if (key == "theta") {
    config.params.theta = parse_double(key, value);
  } else if (key == "allow_sigma_zero") {
    config.params.allow_sigma_zero = parse_bool(key, value);
  } else if (key == "coefficient") {
    config.coefficient = parse_coefficient(value);
  } else if (key == "case") {
    config.case_id = value;
  } else if (key == "levels") {
    config.levels.clear();
    for (const std::string& t : split_ws(value)) {
      config.levels.push_back(static_cast<int>(parse_int(key, t)));
    }
    if (config.levels.empty()) {
      throw invalid_input("config: 'levels' expects at least one entry");
    }
  } else if (key == "beta") {
    config.beta = parse_double(key, value);
  } else if (key == "samples") {
    config.samples = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    config.seed = parse_u64(key, value);
  } else if (key == "threads") {
    config.threads = static_cast<int>(parse_int(key, value));
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else if (key == "grid_nx") {
    config.grid_nx = static_cast<int>(parse_int(key, value));
  } else if (key == "grid_ny") {
    config.grid_ny = static_cast<int>(parse_int(key, value));
  } else {
    throw invalid_input("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  bool saw_version = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) {
      raw.erase(hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) {
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw invalid_input("config: line " + std::to_string(lineno) +
                          " is not key=value: '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw invalid_input("config: line " + std::to_string(lineno) +
                          " has an empty key");
    }
    if (key == "schema_version") {
      saw_version = true;
    }
    apply_config_entry(config, key, value);
  }
  if (!saw_version) {
    throw invalid_input("config: missing required key 'schema_version'");
  }
  return config;
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  RunConfig config;
  if (!path.empty()) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) {
      throw invalid_input("config: cannot open '" + path + "'");
    }
    std::string text;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) {
      text.append(buf, n);
    }
    std::fclose(f);
    config = parse_config_text(text);
  }
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos) {
      throw invalid_input("config: override is not key=value: '" + ov + "'");
    }
    apply_config_entry(config, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  validate_config(config);
  return config;
}

void validate_config(const RunConfig& config) {
  if (config.domain.width() <= 0.0 || config.domain.height() <= 0.0) {
    throw invalid_input("config: domain must have positive width and height");
  }
  if (config.nx < 1 || config.ny < 1) {
    throw invalid_input("config: nx and ny must be >= 1");
  }
  if (config.p < 1) {
    throw invalid_input("config: p must be >= 1");
  }
  const auto n_elem =
      static_cast<std::size_t>(config.nx) * static_cast<std::size_t>(config.ny);
  if (!config.degrees.empty() && config.degrees.size() != n_elem) {
    throw invalid_input("config: 'degrees' must list one degree per element");
  }
  for (int d : config.degrees) {
    if (d < 1) {
      throw invalid_input("config: every degree must be >= 1");
    }
  }
  if (config.quad_order < 0) {
    throw invalid_input("config: quad_order must be >= 0");
  }
  config.params.validate();
  if (config.case_id != "a" && config.case_id != "b" &&
      config.case_id != "c" && config.case_id != "zero") {
    throw invalid_input("config: unknown case '" + config.case_id + "'");
  }
  const bool unit_square = config.domain.xmin == 0.0 &&
                           config.domain.ymin == 0.0 &&
                           config.domain.xmax == 1.0 &&
                           config.domain.ymax == 1.0;
  if (config.case_id != "zero" && !unit_square) {
    throw invalid_input("config: cases a/b/c are defined on the unit square; "
                        "use case 'zero' for other domains");
  }
  for (int l : config.levels) {
    if (l < 1) {
      throw invalid_input("config: every level must be >= 1");
    }
  }
  if (config.samples < 1) {
    throw invalid_input("config: samples must be >= 1");
  }
  if (config.threads < 1) {
    throw invalid_input("config: threads must be >= 1");
  }
  if (config.grid_nx < 2 || config.grid_ny < 2) {
    throw invalid_input("config: grid_nx and grid_ny must be >= 2");
  }
}

} // namespace dgrd
