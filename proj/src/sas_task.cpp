#include "cpc/sas_task.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace cpc {

SasSyntaxError::SasSyntaxError(std::size_t line, const std::string& what)
    : SasError("line " + std::to_string(line) + ": " + what), line_(line) {}

std::vector<int> SasTask::goal_variables() const {
  std::vector<int> vars;
  vars.reserve(goal.size());
  for (const Fact& f : goal) vars.push_back(f.var);
  return vars;
}

bool SasTask::is_goal(const State& s) const {
  return std::all_of(goal.begin(), goal.end(),
                     [&](const Fact& f) { return s[static_cast<std::size_t>(f.var)] == f.value; });
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Line cursor over the translator output. Line numbers are 1-based and
// refer to the physical line in the input.
class LineReader {
 public:
  explicit LineReader(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) lines_.push_back(std::move(line));
  }

  std::size_t line_number() const { return pos_ + 1; }

  std::string_view next_line(std::string_view expecting) {
    if (pos_ >= lines_.size()) {
      throw SasSyntaxError(line_number(), "unexpected end of file, expected " + std::string(expecting));
    }
    return trim(lines_[pos_++]);
  }

  // Raw line: operator and value names may carry significant inner spaces.
  std::string raw_line(std::string_view expecting) {
    if (pos_ >= lines_.size()) {
      throw SasSyntaxError(line_number(), "unexpected end of file, expected " + std::string(expecting));
    }
    std::string_view s = lines_[pos_++];
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return std::string(s);
  }

  void expect(std::string_view keyword) {
    const std::size_t at = line_number();
    if (next_line(keyword) != keyword) {
      throw SasSyntaxError(at, "expected '" + std::string(keyword) + "'");
    }
  }

  long long integer(std::string_view what) {
    const std::size_t at = line_number();
    const std::string_view s = next_line(what);
    return parse_int(s, at, what);
  }

  std::vector<long long> integers(std::size_t count, std::string_view what) {
    const std::size_t at = line_number();
    const std::string_view s = next_line(what);
    std::vector<long long> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
      if (i >= s.size()) break;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
      out.push_back(parse_int(s.substr(i, j - i), at, what));
      i = j;
    }
    if (out.size() != count) {
      throw SasSyntaxError(at, "expected " + std::to_string(count) + " integers for " + std::string(what) +
                                   ", got " + std::to_string(out.size()));
    }
    return out;
  }

  bool at_end() const {
    for (std::size_t i = pos_; i < lines_.size(); ++i) {
      if (!trim(lines_[i]).empty()) return false;
    }
    return true;
  }

 private:
  static long long parse_int(std::string_view s, std::size_t at, std::string_view what) {
    long long v = 0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (s.empty() || ec != std::errc() || ptr != end) {
      throw SasSyntaxError(at, "expected integer for " + std::string(what) + ", got '" + std::string(s) + "'");
    }
    return v;
  }

  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

int checked_count(long long v, std::size_t line, std::string_view what) {
  if (v < 0 || v > std::numeric_limits<int>::max()) {
    throw SasSyntaxError(line, "invalid count for " + std::string(what));
  }
  return static_cast<int>(v);
}

PartialState to_sorted(std::map<int, Value> facts) {
  PartialState out;
  out.reserve(facts.size());
  for (const auto& [var, value] : facts) out.push_back({var, value});
  return out;
}

Operator parse_operator(LineReader& r) {
  Operator op;
  r.expect("begin_operator");
  op.name = std::string(trim(r.raw_line("operator name")));
  std::map<int, Value> pre;
  std::map<int, Value> eff;

  std::size_t at = r.line_number();
  const int num_prevail = checked_count(r.integer("prevail count"), at, "prevail conditions");
  for (int i = 0; i < num_prevail; ++i) {
    at = r.line_number();
    const auto vals = r.integers(2, "prevail condition");
    if (!pre.emplace(static_cast<int>(vals[0]), static_cast<Value>(vals[1])).second) {
      throw SasSyntaxError(at, "duplicate precondition variable in operator '" + op.name + "'");
    }
  }

  at = r.line_number();
  const int num_effects = checked_count(r.integer("effect count"), at, "effects");
  for (int i = 0; i < num_effects; ++i) {
    at = r.line_number();
    const std::string_view line = r.next_line("effect");
    std::istringstream fields{std::string(line)};
    long long num_cond = 0;
    if (!(fields >> num_cond)) throw SasSyntaxError(at, "malformed effect line");
    if (num_cond != 0) {
      throw SasUnsupportedError("line " + std::to_string(at) + ": conditional effects are not supported (operator '" +
                                op.name + "')");
    }
    long long var = 0, pre_value = 0, post = 0;
    std::string extra;
    if (!(fields >> var >> pre_value >> post) || (fields >> extra)) {
      throw SasSyntaxError(at, "malformed effect line");
    }
    if (pre_value != -1) {
      auto [it, inserted] = pre.emplace(static_cast<int>(var), static_cast<Value>(pre_value));
      if (!inserted && it->second != pre_value) {
        throw SasSyntaxError(at, "contradictory preconditions in operator '" + op.name + "'");
      }
    }
    if (!eff.emplace(static_cast<int>(var), static_cast<Value>(post)).second) {
      throw SasSyntaxError(at, "duplicate effect variable in operator '" + op.name + "'");
    }
  }
  at = r.line_number();
  op.cost = r.integer("operator cost");
  if (op.cost < 0) throw SasValidationError("operator '" + op.name + "' has negative cost");
  r.expect("end_operator");
  op.pre = to_sorted(std::move(pre));
  op.eff = to_sorted(std::move(eff));
  return op;
}

}  // namespace

SasTask parse_sas(std::istream& in) {
  LineReader r(in);
  SasTask task;

  r.expect("begin_version");
  std::size_t at = r.line_number();
  if (const long long version = r.integer("version"); version != 3) {
    throw SasUnsupportedError("line " + std::to_string(at) + ": unsupported translator format version " +
                              std::to_string(version));
  }
  r.expect("end_version");

  r.expect("begin_metric");
  at = r.line_number();
  const long long metric = r.integer("metric");
  if (metric != 0 && metric != 1) throw SasSyntaxError(at, "metric must be 0 or 1");
  task.unit_cost = metric == 0;
  r.expect("end_metric");

  at = r.line_number();
  const int num_vars = checked_count(r.integer("variable count"), at, "variables");
  task.variables.reserve(static_cast<std::size_t>(num_vars));
  for (int v = 0; v < num_vars; ++v) {
    Variable var;
    r.expect("begin_variable");
    var.name = std::string(r.next_line("variable name"));
    at = r.line_number();
    if (r.integer("axiom layer") != -1) {
      throw SasUnsupportedError("line " + std::to_string(at) + ": derived variable '" + var.name +
                                "' (axioms are not supported)");
    }
    at = r.line_number();
    var.domain_size = checked_count(r.integer("domain size"), at, "domain size");
    if (var.domain_size < 1) throw SasSyntaxError(at, "domain size must be positive");
    for (int i = 0; i < var.domain_size; ++i) var.value_names.push_back(r.raw_line("value name"));
    r.expect("end_variable");
    task.variables.push_back(std::move(var));
  }

  // Mutex groups carry no information the planner uses.
  at = r.line_number();
  const int num_mutex = checked_count(r.integer("mutex group count"), at, "mutex groups");
  for (int g = 0; g < num_mutex; ++g) {
    r.expect("begin_mutex_group");
    at = r.line_number();
    const int n = checked_count(r.integer("mutex group size"), at, "mutex facts");
    for (int i = 0; i < n; ++i) r.integers(2, "mutex fact");
    r.expect("end_mutex_group");
  }

  r.expect("begin_state");
  task.initial.reserve(static_cast<std::size_t>(num_vars));
  for (int v = 0; v < num_vars; ++v) task.initial.push_back(static_cast<Value>(r.integer("initial value")));
  r.expect("end_state");

  r.expect("begin_goal");
  at = r.line_number();
  const int num_goals = checked_count(r.integer("goal count"), at, "goal facts");
  std::map<int, Value> goal;
  for (int i = 0; i < num_goals; ++i) {
    at = r.line_number();
    const auto vals = r.integers(2, "goal fact");
    if (!goal.emplace(static_cast<int>(vals[0]), static_cast<Value>(vals[1])).second) {
      throw SasSyntaxError(at, "duplicate goal variable");
    }
  }
  task.goal = to_sorted(std::move(goal));
  r.expect("end_goal");

  at = r.line_number();
  const int num_ops = checked_count(r.integer("operator count"), at, "operators");
  task.operators.reserve(static_cast<std::size_t>(num_ops));
  for (int i = 0; i < num_ops; ++i) {
    Operator op = parse_operator(r);
    if (task.unit_cost) op.cost = 1;
    task.operators.push_back(std::move(op));
  }

  at = r.line_number();
  if (r.integer("axiom count") != 0) {
    throw SasUnsupportedError("line " + std::to_string(at) + ": axioms are not supported");
  }
  if (!r.at_end()) throw SasSyntaxError(r.line_number(), "trailing content after axiom section");

  validate_task(task);
  return task;
}

SasTask parse_sas_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sas(in);
}

SasTask parse_sas_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SasError("cannot open task file '" + path.string() + "'");
  return parse_sas(in);
}

void validate_task(const SasTask& task) {
  const auto n = static_cast<int>(task.variables.size());
  auto check_fact = [&](const Fact& f, const std::string& where) {
    if (f.var < 0 || f.var >= n) {
      throw SasValidationError(where + ": variable " + std::to_string(f.var) + " out of range");
    }
    if (f.value < 0 || f.value >= task.domain_size(f.var)) {
      throw SasValidationError(where + ": value " + std::to_string(f.value) + " out of range for variable " +
                               std::to_string(f.var));
    }
  };

  if (task.initial.size() != task.variables.size()) {
    throw SasValidationError("initial state must assign every variable");
  }
  for (int v = 0; v < n; ++v) check_fact({v, task.initial[static_cast<std::size_t>(v)]}, "initial state");
  if (task.goal.empty()) throw SasValidationError("goal is empty");
  for (const Fact& f : task.goal) check_fact(f, "goal");
  for (const Operator& op : task.operators) {
    const std::string where = "operator '" + op.name + "'";
    if (op.eff.empty()) throw SasValidationError(where + " has no effects");
    if (op.cost < 0) throw SasValidationError(where + " has negative cost");
    for (const Fact& f : op.pre) check_fact(f, where);
    for (const Fact& f : op.eff) check_fact(f, where);
  }
}

bool is_applicable(const State& s, const Operator& op) {
  return std::all_of(op.pre.begin(), op.pre.end(),
                     [&](const Fact& f) { return s[static_cast<std::size_t>(f.var)] == f.value; });
}

std::optional<State> apply_operator(const State& s, const Operator& op) {
  if (!is_applicable(s, op)) return std::nullopt;
  State next = s;
  for (const Fact& f : op.eff) next[static_cast<std::size_t>(f.var)] = f.value;
  return next;
}

void dump_task(const SasTask& task, std::ostream& out) {
  auto facts = [&](const PartialState& ps) {
    std::string s;
    for (const Fact& f : ps) {
      if (!s.empty()) s += ' ';
      s += std::to_string(f.var) + '=' + std::to_string(f.value);
    }
    return s;
  };
  out << "variables " << task.variables.size() << '\n';
  for (std::size_t v = 0; v < task.variables.size(); ++v) {
    out << "  " << v << ' ' << task.variables[v].name << " domain " << task.variables[v].domain_size << '\n';
  }
  out << "initial";
  for (Value x : task.initial) out << ' ' << x;
  out << '\n' << "goal " << facts(task.goal) << '\n';
  out << "operators " << task.operators.size() << '\n';
  for (const Operator& op : task.operators) {
    out << "  " << op.name << " | pre " << facts(op.pre) << " | eff " << facts(op.eff) << " | cost " << op.cost
        << '\n';
  }
}

}  // namespace cpc
