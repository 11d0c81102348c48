#include "mrta/dataset_io.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"

namespace mrta {
namespace {

using json = nlohmann::json;  // std::map objects: keys come out sorted

constexpr const char* kInstanceFormat = "mrta-instance";
constexpr const char* kScheduleFormat = "mrta-schedule";
constexpr const char* kTensorFormat = "mrta-decision-tensors";
constexpr const char* kRewardFormat = "mrta-reward-matrix";
constexpr const char* kManifestFormat = "mrta-dataset-manifest";
constexpr const char* kGeneratorFormat = "mrta-generator-config";

std::string dump(const json& j) { return j.dump(1) + "\n"; }

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < limit; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw DataError(source + ": syntax error at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + e.what());
  }
}

// Read-only cursor into a parsed document that reports schema errors with a
// JSON pointer.
class Node {
 public:
  Node(const json& j, std::string path, const std::string& source)
      : j_(&j), path_(std::move(path)), source_(&source) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(*source_ + ": at " + (path_.empty() ? "/" : path_) + ": " + what);
  }

  Node operator[](const char* key) const {
    if (!j_->is_object()) fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) fail(std::string("missing key '") + key + "'");
    return Node(*it, path_ + "/" + key, *source_);
  }
  bool has(const char* key) const { return j_->is_object() && j_->contains(key); }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }
  Node operator[](std::size_t k) const {
    if (!j_->is_array() || k >= j_->size()) fail("expected an array with more elements");
    return Node((*j_)[k], path_ + "/" + std::to_string(k), *source_);
  }

  double number() const {
    if (!j_->is_number()) fail("expected a finite number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  std::uint64_t count() const {
    if (j_->is_number_unsigned()) return j_->get<std::uint64_t>();
    if (j_->is_number_integer() && j_->get<std::int64_t>() >= 0) return j_->get<std::uint64_t>();
    fail("expected a non-negative integer");
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }
  std::string text() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  bool is_string() const { return j_->is_string(); }
  const std::string& path() const { return path_; }

 private:
  const json* j_;
  std::string path_;
  const std::string* source_;
};

void check_header(const Node& root, const char* format) {
  const std::string found = root["format"].text();
  if (found != format) root["format"].fail("expected format '" + std::string(format) + "', found '" + found + "'");
  const std::uint64_t version = root["version"].count();
  if (version != static_cast<std::uint64_t>(kFormatVersion)) {
    root["version"].fail("unsupported version " + std::to_string(version) + " (expected " +
                         std::to_string(kFormatVersion) + ")");
  }
}

json header(const char* format) {
  json j = json::object();
  j["format"] = format;
  j["version"] = kFormatVersion;
  return j;
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw DataError("refusing to write non-finite " + what);
}

json point_json(Point p) {
  require_finite(p.x, "coordinate");
  require_finite(p.y, "coordinate");
  return json::array({p.x, p.y});
}

Point read_point(const Node& n) {
  if (n.size() != 2) n.fail("expected [x, y]");
  return Point{n[std::size_t{0}].number(), n[std::size_t{1}].number()};
}

json skills_json(const SkillSet& s) {
  json a = json::array();
  for (std::size_t k = 0; k < s.width(); ++k) a.push_back(s.has(k) ? 1 : 0);
  return a;
}

SkillSet read_skills(const Node& n, std::optional<std::size_t> width) {
  const std::size_t w = n.size();
  if (width && w != *width) n.fail("expected " + std::to_string(*width) + " skill flags");
  if (w == 0 || w > SkillSet::kMaxSkills) n.fail("skill vector width out of range");
  SkillSet s(w);
  for (std::size_t k = 0; k < w; ++k) {
    const std::uint64_t v = n[k].count();
    if (v > 1) n[k].fail("expected 0 or 1");
    if (v) s.set(k);
  }
  return s;
}

json binary_matrix_json(const Matrix<std::uint8_t>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) > 1) throw DataError("refusing to write a non-binary matrix");
      row.push_back(static_cast<int>(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix<std::uint8_t> read_binary_matrix(const Node& n, std::size_t rows, std::size_t cols) {
  if (n.size() != rows) n.fail("expected " + std::to_string(rows) + " rows");
  Matrix<std::uint8_t> m(rows, cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const Node row = n[r];
    if (row.size() != cols) row.fail("expected " + std::to_string(cols) + " columns");
    for (std::size_t c = 0; c < cols; ++c) {
      const std::uint64_t v = row[c].count();
      if (v > 1) row[c].fail("expected 0 or 1");
      m(r, c) = static_cast<std::uint8_t>(v);
    }
  }
  return m;
}

json real_matrix_json(const Matrix<double>& m, const std::string& what) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      require_finite(m(r, c), what);
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix<double> read_real_matrix(const Node& n, std::optional<std::size_t> rows,
                                std::optional<std::size_t> cols) {
  const std::size_t nr = n.size();
  if (rows && nr != *rows) n.fail("expected " + std::to_string(*rows) + " rows");
  std::size_t nc = cols ? *cols : (nr > 0 ? n[std::size_t{0}].size() : 0);
  Matrix<double> m(nr, nc, 0.0);
  for (std::size_t r = 0; r < nr; ++r) {
    const Node row = n[r];
    if (row.size() != nc) row.fail("expected " + std::to_string(nc) + " columns");
    for (std::size_t c = 0; c < nc; ++c) m(r, c) = row[c].number();
  }
  return m;
}

json status_json(const TaskStatus& s) {
  return json{{"ready", s.ready}, {"assigned", s.assigned}, {"incomplete", s.incomplete}};
}

TaskStatus read_status(const Node& n) {
  return TaskStatus{n["ready"].boolean(), n["assigned"].boolean(), n["incomplete"].boolean()};
}

json instance_json(const ProblemInstance& inst) {
  json j = header(kInstanceFormat);
  j["units"] = json{{"distance", "distance unit"},
                    {"time", "timestep"},
                    {"speed", "distance unit per timestep"}};
  j["skill_count"] = inst.skill_count();
  j["speed"] = inst.speed();
  json robots = json::array();
  for (std::size_t i = 0; i < inst.num_robots(); ++i) {
    const RobotState& r = inst.robot(i);
    robots.push_back(json{{"capabilities", skills_json(r.capabilities)},
                          {"position", point_json(r.position)},
                          {"remaining_duration", r.remaining_duration},
                          {"available", r.available},
                          {"start_depot", point_json(inst.start_positions()[i])},
                          {"end_depot", point_json(inst.end_positions()[i])}});
  }
  j["robots"] = std::move(robots);
  json tasks = json::array();
  for (const TaskSpec& t : inst.tasks()) {
    tasks.push_back(json{{"position", point_json(t.position)},
                         {"duration", t.duration},
                         {"required", skills_json(t.required)},
                         {"status", status_json(t.status)}});
  }
  j["tasks"] = std::move(tasks);
  j["precedence"] = binary_matrix_json(inst.precedence());
  j["robot_graph"] = binary_matrix_json(inst.robot_graph());
  return j;
}

ProblemInstance read_instance_json(const Node& root, const std::string& source) {
  check_header(root, kInstanceFormat);
  const std::size_t skills = root["skill_count"].count();
  const double speed = root["speed"].number();
  const Node rn = root["robots"];
  std::vector<RobotState> robots;
  std::vector<Point> start, end;
  for (std::size_t i = 0; i < rn.size(); ++i) {
    const Node r = rn[i];
    RobotState s;
    s.capabilities = read_skills(r["capabilities"], skills);
    s.position = read_point(r["position"]);
    s.remaining_duration = r["remaining_duration"].number();
    s.available = r["available"].boolean();
    robots.push_back(s);
    start.push_back(read_point(r["start_depot"]));
    end.push_back(read_point(r["end_depot"]));
  }
  const Node tn = root["tasks"];
  std::vector<TaskSpec> tasks;
  for (std::size_t j = 0; j < tn.size(); ++j) {
    const Node t = tn[j];
    TaskSpec spec;
    spec.position = read_point(t["position"]);
    spec.duration = t["duration"].number();
    spec.required = read_skills(t["required"], skills);
    spec.status = read_status(t["status"]);
    tasks.push_back(spec);
  }
  const std::size_t n = robots.size();
  const std::size_t m = tasks.size();
  auto prec = read_binary_matrix(root["precedence"], m, m);
  auto graph = read_binary_matrix(root["robot_graph"], n, n);
  try {
    return ProblemInstance(std::move(robots), std::move(tasks), std::move(prec), std::move(start),
                           std::move(end), speed, skills, std::move(graph));
  } catch (const InvalidInput& e) {
    throw DataError(source + ": invalid instance: " + e.what());
  }
}

json schedule_json(const Schedule& s) {
  json j = header(kScheduleFormat);
  require_finite(s.makespan, "makespan");
  j["makespan"] = s.makespan;
  json entries = json::array();
  for (const auto& e : s.entries) {
    require_finite(e.start, "entry start");
    require_finite(e.end, "entry end");
    if (e.end < e.start) throw DataError("refusing to write an entry that ends before it starts");
    json task = e.is_idle() ? json("idle") : json(e.task);
    entries.push_back(json{{"robot", e.robot}, {"task", task}, {"start", e.start}, {"end", e.end}});
  }
  j["entries"] = std::move(entries);
  return j;
}

Schedule read_schedule_json(const Node& root) {
  check_header(root, kScheduleFormat);
  Schedule s;
  s.makespan = root["makespan"].number();
  const Node en = root["entries"];
  for (std::size_t k = 0; k < en.size(); ++k) {
    const Node e = en[k];
    ScheduleEntry entry;
    entry.robot = e["robot"].count();
    const Node task = e["task"];
    if (task.is_string()) {
      if (task.text() != "idle") task.fail("expected a task index or \"idle\"");
      entry.task = kIdleTask;
    } else {
      entry.task = task.count();
    }
    entry.start = e["start"].number();
    entry.end = e["end"].number();
    if (entry.end < entry.start) e.fail("entry ends before it starts");
    s.entries.push_back(entry);
  }
  return s;
}

// Shared invariant gate for tensor sets, used by writer and reader.
void check_tensors(const DecisionTensorSet& set, const std::string& where) {
  const std::size_t n = set.n_robots;
  const std::size_t cols = set.n_tasks + 1;
  auto bad = [&](std::size_t k, const std::string& what) {
    throw DataError(where + ": decision point " + std::to_string(k) + ": " + what);
  };
  if (!(set.gamma > 0.0 && set.gamma <= 1.0)) throw DataError(where + ": gamma must lie in (0, 1]");
  for (std::size_t k = 0; k < set.points.size(); ++k) {
    const DecisionPoint& p = set.points[k];
    if (!std::isfinite(p.time)) bad(k, "non-finite time");
    if (k > 0 && !(p.time > set.points[k - 1].time)) bad(k, "times must be strictly increasing");
    if (p.robots.size() != n) bad(k, "expected " + std::to_string(n) + " robot states");
    if (p.tasks.size() != set.n_tasks) bad(k, "expected " + std::to_string(set.n_tasks) + " task statuses");
    const std::string shape = std::to_string(n) + "x" + std::to_string(cols);
    if (p.mask.rows() != n || p.mask.cols() != cols) bad(k, "mask must be N x (M+1) = " + shape);
    if (p.target.rows() != n || p.target.cols() != cols) bad(k, "target must be N x (M+1) = " + shape);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        const double o = p.target(i, j);
        if (!std::isfinite(o) || o < 0.0 || o > 1.0) {
          bad(k, "target entry (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") outside [0, 1]");
        }
        if (p.mask(i, j) > 1) bad(k, "mask is not binary");
        if (!p.mask(i, j) && o != 0.0) {
          bad(k, "target entry (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") is non-zero where the mask is zero");
        }
      }
    }
  }
}

json tensors_json(const DecisionTensorSet& set) {
  check_tensors(set, "decision tensors");
  json j = header(kTensorFormat);
  j["instance_id"] = set.instance_id;
  j["gamma"] = set.gamma;
  j["n_robots"] = set.n_robots;
  j["n_tasks"] = set.n_tasks;
  json points = json::array();
  for (const DecisionPoint& p : set.points) {
    json robots = json::array();
    for (const RobotState& r : p.robots) {
      require_finite(r.remaining_duration, "remaining duration");
      robots.push_back(json{{"position", point_json(r.position)},
                            {"remaining_duration", r.remaining_duration},
                            {"available", r.available},
                            {"capabilities", skills_json(r.capabilities)}});
    }
    json tasks = json::array();
    for (const TaskStatus& t : p.tasks) tasks.push_back(status_json(t));
    points.push_back(json{{"time", p.time},
                          {"robots", std::move(robots)},
                          {"tasks", std::move(tasks)},
                          {"mask", binary_matrix_json(p.mask)},
                          {"target", real_matrix_json(p.target, "target")}});
  }
  j["decision_points"] = std::move(points);
  return j;
}

DecisionTensorSet read_tensors_json(const Node& root, const std::string& source,
                                    const ProblemInstance* instance) {
  check_header(root, kTensorFormat);
  DecisionTensorSet set;
  set.instance_id = root["instance_id"].text();
  set.gamma = root["gamma"].number();
  set.n_robots = root["n_robots"].count();
  set.n_tasks = root["n_tasks"].count();
  if (instance && (set.n_robots != instance->num_robots() || set.n_tasks != instance->num_tasks())) {
    throw DataError(source + ": tensors are for " + std::to_string(set.n_robots) + " robots and " +
                    std::to_string(set.n_tasks) + " tasks, instance has " +
                    std::to_string(instance->num_robots()) + " and " +
                    std::to_string(instance->num_tasks()));
  }
  const Node pn = root["decision_points"];
  for (std::size_t k = 0; k < pn.size(); ++k) {
    const Node p = pn[k];
    DecisionPoint dp;
    dp.time = p["time"].number();
    const Node rn = p["robots"];
    if (rn.size() != set.n_robots) rn.fail("expected " + std::to_string(set.n_robots) + " robots");
    for (std::size_t i = 0; i < rn.size(); ++i) {
      const Node r = rn[i];
      RobotState s;
      s.position = read_point(r["position"]);
      s.remaining_duration = r["remaining_duration"].number();
      s.available = r["available"].boolean();
      s.capabilities = read_skills(r["capabilities"], std::nullopt);
      dp.robots.push_back(s);
    }
    const Node tn = p["tasks"];
    if (tn.size() != set.n_tasks) tn.fail("expected " + std::to_string(set.n_tasks) + " tasks");
    for (std::size_t j = 0; j < tn.size(); ++j) dp.tasks.push_back(read_status(tn[j]));
    dp.mask = read_binary_matrix(p["mask"], set.n_robots, set.n_tasks + 1);
    dp.target = read_real_matrix(p["target"], set.n_robots, set.n_tasks + 1);
    set.points.push_back(std::move(dp));
  }
  check_tensors(set, source);
  return set;
}

json reward_json(const RewardMatrixFile& f) {
  json j = header(kRewardFormat);
  j["instance_id"] = f.instance_id;
  j["decision_index"] = f.decision_index;
  j["n_robots"] = f.rewards.rows();
  j["n_columns"] = f.rewards.cols();
  j["rewards"] = real_matrix_json(f.rewards, "reward");
  return j;
}

RewardMatrixFile read_reward_json(const Node& root, const std::string& source,
                                  const ProblemInstance* instance) {
  check_header(root, kRewardFormat);
  RewardMatrixFile f;
  f.instance_id = root["instance_id"].text();
  f.decision_index = root["decision_index"].count();
  const std::size_t rows = root["n_robots"].count();
  const std::size_t cols = root["n_columns"].count();
  if (instance && (rows != instance->num_robots() || cols != instance->num_tasks() + 1)) {
    throw DataError(source + ": reward matrix is " + std::to_string(rows) + "x" +
                    std::to_string(cols) + ", expected N x (M+1) = " +
                    std::to_string(instance->num_robots()) + "x" +
                    std::to_string(instance->num_tasks() + 1));
  }
  f.rewards = read_real_matrix(root["rewards"], rows, cols);
  return f;
}

json generator_json(const GeneratorConfig& c) {
  json j = header(kGeneratorFormat);
  j["n_robots"] = c.n_robots;
  j["n_tasks"] = c.n_tasks;
  j["n_skills"] = c.n_skills;
  j["n_precedence"] = c.n_precedence;
  j["area"] = json::array({c.area_min, c.area_max});
  j["duration_range"] = json::array({c.duration_min, c.duration_max});
  j["skills_per_robot"] = json::array({c.robot_skills_min, c.robot_skills_max});
  j["skills_per_task"] = json::array({c.task_skills_min, c.task_skills_max});
  j["speed"] = c.speed;
  return j;
}

GeneratorConfig read_generator_json(const Node& root) {
  check_header(root, kGeneratorFormat);
  GeneratorConfig c;
  c.n_robots = root["n_robots"].count();
  c.n_tasks = root["n_tasks"].count();
  c.n_skills = root["n_skills"].count();
  c.n_precedence = root["n_precedence"].count();
  auto pair = [](const Node& n) {
    if (n.size() != 2) n.fail("expected [low, high]");
    return std::pair{n[std::size_t{0}], n[std::size_t{1}]};
  };
  auto [a0, a1] = pair(root["area"]);
  c.area_min = a0.number();
  c.area_max = a1.number();
  auto [d0, d1] = pair(root["duration_range"]);
  c.duration_min = d0.number();
  c.duration_max = d1.number();
  auto [r0, r1] = pair(root["skills_per_robot"]);
  c.robot_skills_min = r0.count();
  c.robot_skills_max = r1.count();
  auto [t0, t1] = pair(root["skills_per_task"]);
  c.task_skills_min = t0.count();
  c.task_skills_max = t1.count();
  c.speed = root["speed"].number();
  try {
    c.validate();
  } catch (const InvalidInput& e) {
    root.fail(std::string("invalid generator config: ") + e.what());
  }
  return c;
}

json manifest_json(const DatasetManifest& m) {
  json j = header(kManifestFormat);
  j["generator"] = generator_json(m.generator);
  j["seed_start"] = m.seed_start;
  j["count"] = m.count;
  j["gamma"] = m.gamma;
  j["time_limit"] = m.time_limit;
  json records = json::array();
  for (const auto& r : m.records) {
    records.push_back(json{{"id", r.id},
                           {"seed", r.seed},
                           {"instance", r.instance_file},
                           {"schedule", r.schedule_file},
                           {"tensors", r.tensor_file},
                           {"status", to_string(r.status)},
                           {"makespan", r.makespan},
                           {"explored_nodes", r.explored_nodes},
                           {"decision_points", r.decision_points},
                           {"included", r.included}});
  }
  j["instances"] = std::move(records);
  return j;
}

DatasetManifest read_manifest_json(const Node& root) {
  check_header(root, kManifestFormat);
  DatasetManifest m;
  m.generator = read_generator_json(root["generator"]);
  m.seed_start = root["seed_start"].count();
  m.count = root["count"].count();
  m.gamma = root["gamma"].number();
  m.time_limit = root["time_limit"].number();
  const Node rn = root["instances"];
  for (std::size_t k = 0; k < rn.size(); ++k) {
    const Node r = rn[k];
    ManifestRecord rec;
    rec.id = r["id"].text();
    rec.seed = r["seed"].count();
    rec.instance_file = r["instance"].text();
    rec.schedule_file = r["schedule"].text();
    rec.tensor_file = r["tensors"].text();
    try {
      rec.status = solver_status_from_string(r["status"].text());
    } catch (const InvalidInput& e) {
      r["status"].fail(e.what());
    }
    rec.makespan = r["makespan"].number();
    rec.explored_nodes = r["explored_nodes"].count();
    rec.decision_points = r["decision_points"].count();
    rec.included = r["included"].boolean();
    m.records.push_back(std::move(rec));
  }
  return m;
}

template <class F>
auto with_root(const std::string& text, const std::string& source, F&& f) {
  const json j = parse(text, source);
  const Node root(j, "", source);
  return f(root);
}

}  // namespace

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  static std::atomic<std::uint64_t> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string instance_to_text(const ProblemInstance& instance) { return dump(instance_json(instance)); }
ProblemInstance instance_from_text(const std::string& text, const std::string& source) {
  return with_root(text, source, [&](const Node& r) { return read_instance_json(r, source); });
}
void write_instance(const std::filesystem::path& path, const ProblemInstance& instance) {
  write_text_atomic(path, instance_to_text(instance));
}
ProblemInstance read_instance(const std::filesystem::path& path) {
  return instance_from_text(read_text(path), path.string());
}

std::string schedule_to_text(const Schedule& schedule) { return dump(schedule_json(schedule)); }
Schedule schedule_from_text(const std::string& text, const std::string& source) {
  return with_root(text, source, [](const Node& r) { return read_schedule_json(r); });
}
void write_schedule(const std::filesystem::path& path, const Schedule& schedule) {
  write_text_atomic(path, schedule_to_text(schedule));
}
Schedule read_schedule(const std::filesystem::path& path) {
  return schedule_from_text(read_text(path), path.string());
}

std::string decision_tensors_to_text(const DecisionTensorSet& set) {
  return dump(tensors_json(set));
}
DecisionTensorSet decision_tensors_from_text(const std::string& text, const std::string& source,
                                             const ProblemInstance* instance) {
  return with_root(text, source,
                   [&](const Node& r) { return read_tensors_json(r, source, instance); });
}
void write_decision_tensors(const std::filesystem::path& path, const DecisionTensorSet& set) {
  write_text_atomic(path, decision_tensors_to_text(set));
}
DecisionTensorSet read_decision_tensors(const std::filesystem::path& path,
                                        const ProblemInstance* instance) {
  return decision_tensors_from_text(read_text(path), path.string(), instance);
}

std::string reward_matrix_to_text(const RewardMatrixFile& file) { return dump(reward_json(file)); }
RewardMatrixFile reward_matrix_from_text(const std::string& text, const std::string& source,
                                         const ProblemInstance* instance) {
  return with_root(text, source,
                   [&](const Node& r) { return read_reward_json(r, source, instance); });
}
void write_reward_matrix(const std::filesystem::path& path, const RewardMatrixFile& file) {
  write_text_atomic(path, reward_matrix_to_text(file));
}
RewardMatrixFile read_reward_matrix(const std::filesystem::path& path,
                                    const ProblemInstance* instance) {
  return reward_matrix_from_text(read_text(path), path.string(), instance);
}

std::string manifest_to_text(const DatasetManifest& manifest) {
  return dump(manifest_json(manifest));
}
DatasetManifest manifest_from_text(const std::string& text, const std::string& source) {
  return with_root(text, source, [](const Node& r) { return read_manifest_json(r); });
}
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  write_text_atomic(path, manifest_to_text(manifest));
}
DatasetManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_text(read_text(path), path.string());
}

std::string generator_config_to_text(const GeneratorConfig& config) {
  return dump(generator_json(config));
}
GeneratorConfig generator_config_from_text(const std::string& text, const std::string& source) {
  return with_root(text, source, [](const Node& r) { return read_generator_json(r); });
}

}  // namespace mrta
