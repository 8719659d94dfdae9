#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <istream>

#include "infuser/error.hpp"
#include "infuser/evaluation.hpp"

namespace infuser {

namespace {

namespace pt = boost::property_tree;

template <typename T>
T read_value(const pt::ptree& section, const std::string& section_name, const std::string& key, T fallback) {
  auto child = section.get_child_optional(key);
  if (!child) return fallback;
  auto value = child->get_value_optional<T>();
  if (!value) throw IoError("[" + section_name + "] bad value for '" + key + "'");
  return *value;
}

BenchRowConfig read_row(const pt::ptree& section, const std::string& name, const BenchRowConfig& base) {
  static const char* const known[] = {"dataset", "algo", "k", "r", "threads", "weights",
                                      "seed", "r_eval", "directed", "name"};
  for (const auto& [key, unused] : section) {
    (void)unused;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw IoError("[" + name + "] unknown key '" + key + "'");
  }
  BenchRowConfig row = base;
  row.name = read_value<std::string>(section, name, "name", name == "defaults" ? base.name : name);
  row.dataset = read_value<std::string>(section, name, "dataset", base.dataset);
  row.algo = read_value<std::string>(section, name, "algo", base.algo);
  row.k = read_value<std::size_t>(section, name, "k", base.k);
  row.r = read_value<std::size_t>(section, name, "r", base.r);
  row.threads = read_value<int>(section, name, "threads", base.threads);
  row.weights = read_value<std::string>(section, name, "weights", base.weights);
  row.seed = read_value<std::uint64_t>(section, name, "seed", base.seed);
  row.r_eval = read_value<std::size_t>(section, name, "r_eval", base.r_eval);
  row.directed = read_value<bool>(section, name, "directed", base.directed);
  return row;
}

}  // namespace

BenchConfig parse_bench_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.message(), e.line());
  }
  BenchRowConfig defaults;
  if (auto section = tree.get_child_optional("defaults")) defaults = read_row(*section, "defaults", defaults);

  BenchConfig config;
  for (const auto& [name, section] : tree) {
    if (name == "defaults") continue;
    if (section.empty()) throw IoError("key '" + name + "' outside a section");
    BenchRowConfig row = read_row(section, name, defaults);
    if (row.dataset.empty()) throw IoError("[" + name + "] has no dataset");
    if (row.k == 0 || row.r == 0) throw IoError("[" + name + "] k and r must be positive");
    config.rows.push_back(std::move(row));
  }
  return config;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_bench_config(in);
}

}  // namespace infuser
