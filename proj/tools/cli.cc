// Copyright 2026 The PIR-CSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <signal.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pircsi/field.h"
#include "pircsi/model.h"
#include "pircsi/net.h"
#include "pircsi/protocol.h"
#include "pircsi/rng.h"
#include "pircsi/wire.h"

namespace pircsi::cli {
namespace {

using nlohmann::json;

// Thrown by the subcommand bodies; Run maps it to an exit code.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void Usage(const std::string& message) { throw Failure{kExitUsage, message}; }

template <typename T>
T OrUsage(absl::StatusOr<T> v) {
  if (!v.ok()) Usage(std::string(v.status().message()));
  return *std::move(v);
}

void OrUsage(const absl::Status& s) {
  if (!s.ok()) Usage(std::string(s.message()));
}

// Failures after validation (network, I/O) are check failures.
template <typename T>
T OrFail(absl::StatusOr<T> v) {
  if (!v.ok()) throw Failure{kExitCheckFailed, v.status().ToString()};
  return *std::move(v);
}

struct Instance {
  std::string model = "I";
  int k = 5;
  int m = 1;
  uint32_t q = 3;
  uint32_t degree = 1;
  uint64_t seed = 1;

  void AddFlags(CLI::App* app, bool field) {
    app->add_option("--model", model, "I (demand outside the side information) or II (inside)")
        ->capture_default_str();
    app->add_option("--k", k, "number of messages K")->capture_default_str();
    app->add_option("--m", m, "side-information size M")->capture_default_str();
    if (field) {
      app->add_option("--q", q, "prime field size, at least 3")->capture_default_str();
      app->add_option("--degree", degree, "extension degree of the message field")
          ->capture_default_str();
    }
    app->add_option("--seed", seed, "random seed")->capture_default_str();
  }

  Model ParsedModel() const { return OrUsage(ParseModel(model)); }
  Model Validate() const {
    const Model mo = ParsedModel();
    OrUsage(ValidateInstance(mo, k, m));
    return mo;
  }
  FieldParamsPtr Field() const { return OrUsage(FieldParams::Create(q, degree)); }
};

RpMutation ParseMutation(const std::string& name) {
  if (name == "none") return RpMutation::kNone;
  if (name == "unshuffled") return RpMutation::kUnshuffledSets;
  if (name == "deterministic-extras") return RpMutation::kDeterministicExtras;
  if (name == "skewed-pmf") return RpMutation::kSkewedPmf;
  Usage(absl::StrCat("unknown mutation '", name,
                     "' (none, unshuffled, deterministic-extras, skewed-pmf)"));
}

int DefaultPort() {
  if (const char* env = std::getenv(kPortEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return kDefaultPort;
}

std::string IndexList(const std::vector<MessageIndex>& v) {
  return absl::StrCat("{", absl::StrJoin(v, ", "), "}");
}

std::string ElementList(const std::vector<FieldElement>& v) {
  std::vector<std::string> parts;
  for (const FieldElement& e : v) parts.push_back(e.ToString());
  return absl::StrCat("(", absl::StrJoin(parts, ", "), ")");
}

std::string SetRole(const BuiltQuery& built, size_t slot) {
  const DecoderState& st = built.state;
  if (st.scenario.model == Model::kI) {
    return slot == st.demand_slot ? "demand set: W and the side-information support"
                                  : "partition set";
  }
  switch (st.case_tag) {
    case CaseTag::kCase1:
      return st.probed_index == st.scenario.demand ? "probe of W" : "probe of the other support index";
    case CaseTag::kCase2:
      return slot == st.demand_slot ? "support without W, true coefficients" : "cover set";
    case CaseTag::kCase3:
      return slot == st.demand_slot ? "support with W's coefficient changed" : "cover set";
    case CaseTag::kCase4:
      return "all of [K] with W's coefficient changed";
    case CaseTag::kNone:
      break;
  }
  return "";
}

void PrintQuery(std::ostream& out, const Query& query, const BuiltQuery* reveal) {
  for (size_t i = 0; i < query.sets.size(); ++i) {
    out << "  set " << i + 1 << ": indices " << IndexList(query.sets[i].indices) << " coefficients "
        << ElementList(query.sets[i].coeffs);
    if (reveal != nullptr) out << "  [" << SetRole(*reveal, i) << "]";
    out << "\n";
  }
}

int CmdDemo(const Instance& in, bool reveal, const std::string& format, std::ostream& out) {
  const Model model = in.Validate();
  const FieldParamsPtr params = in.Field();
  if (format != "human" && format != "json") Usage("--format must be human or json");
  Rng rng(in.seed);
  const Database db = Database::Random(params, static_cast<uint32_t>(in.k), rng);
  const Scenario sc = OrUsage(SampleScenario(db, in.m, model, rng));
  const Protocol protocol = OrUsage(Protocol::Create(model, in.k, in.m));
  SeededSource source(rng);
  const BuiltQuery built = OrFail(protocol.Build(sc, source));
  const Answer answer = OrFail(ServeQuery(db, built.query));
  const FieldElement decoded = OrFail(RecoverDemand(answer, built.state));
  const FieldElement& truth = db.message(sc.demand);
  const bool pass = decoded == truth;

  if (format == "json") {
    json sets = json::array();
    for (const QuerySet& s : built.query.sets) {
      json coeffs = json::array();
      for (const FieldElement& c : s.coeffs) coeffs.push_back(c.ToString());
      sets.push_back({{"indices", s.indices}, {"coefficients", coeffs}});
    }
    json values = json::array();
    for (const FieldElement& v : answer.values) values.push_back(v.ToString());
    json sc_coeffs = json::array();
    for (const FieldElement& c : sc.coeffs) sc_coeffs.push_back(c.ToString());
    json j = {{"model", std::string(ModelName(model))},
              {"K", in.k},
              {"M", in.m},
              {"field", params->ToString()},
              {"seed", in.seed},
              {"case", std::string(CaseTagName(model, built.query.case_tag))},
              {"scenario",
               {{"W", sc.demand}, {"S", sc.support}, {"C", sc_coeffs}, {"Y", sc.side_info.ToString()}}},
              {"query", sets},
              {"demand_slot", built.query.sets.empty() ? json(nullptr) : json(built.state.demand_slot + 1)},
              {"answer", values},
              {"decoded", decoded.ToString()},
              {"expected", truth.ToString()},
              {"pass", pass}};
    out << j.dump(2) << "\n";
    return pass ? kExitPass : kExitCheckFailed;
  }

  out << "instance: model " << ModelName(model) << ", K=" << in.k << ", M=" << in.m << ", "
      << params->ToString() << ", seed " << in.seed << "\n";
  out << "user side (private): W=" << sc.demand << ", S=" << IndexList(sc.support)
      << ", C=" << ElementList(sc.coeffs) << ", Y=" << sc.side_info.ToString() << "\n";
  if (built.query.sets.empty()) {
    out << "no query sent: W is recovered from the side information alone\n";
  } else {
    out << "query as seen by the server (" << CaseTagName(model, built.query.case_tag) << "):\n";
    PrintQuery(out, built.query, reveal ? &built : nullptr);
    out << "demand slot (kept by the user): " << built.state.demand_slot + 1 << "\n";
    out << "answer: " << ElementList(answer.values) << "\n";
  }
  out << "decoded X_W = " << decoded.ToString() << ", database X_W = " << truth.ToString() << ": "
      << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitCheckFailed;
}

void WriteReport(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{kExitCheckFailed, absl::StrCat("cannot write ", path)};
  f << j.dump(2) << "\n";
}

int CmdAudit(const Instance& in, bool exact, bool mc, long long trials, long long max_branches,
             const std::string& mutation_name, const std::string& output, std::ostream& out) {
  if (exact == mc) Usage("choose exactly one of --exact or --mc");
  const Model model = in.Validate();
  const RpMutation mutation = ParseMutation(mutation_name);
  if (mutation != RpMutation::kNone && model != Model::kI) {
    Usage("mutations apply to model I only");
  }
  const RateReport rate = OrUsage(MeasureRate(model, in.k, in.m));
  json j;
  bool passed = rate.equal;
  if (exact) {
    ExactAuditOptions options;
    options.mutation = mutation;
    options.max_branches = max_branches;
    auto exact_report = AuditExact(model, in.k, in.m, options);
    if (exact_report.status().code() == absl::StatusCode::kResourceExhausted) {
      Usage(absl::StrCat(exact_report.status().message(), " (audit --mc)"));
    }
    const PosteriorReport report = OrUsage(std::move(exact_report));
    j = ToJson(report);
    passed = passed && report.uniform;
  } else {
    Rng rng(in.seed);
    const MonteCarloReport report =
        OrUsage(AuditMonteCarlo(model, in.k, in.m, trials, rng, mutation));
    j = ToJson(report);
    j["seed"] = in.seed;
    passed = passed && report.passed;
  }
  j["mutation"] = mutation_name;
  j["rate"] = ToJson(rate);
  j["passed"] = passed;
  WriteReport(j, output, out);
  return passed ? kExitPass : kExitCheckFailed;
}

int CmdSweep(const std::string& model_name, int k_min, int k_max, std::optional<int> m_min,
             std::optional<int> m_max, std::ostream& out) {
  const Model model = OrUsage(ParseModel(model_name));
  out << "model,K,M,elements_downloaded,measured_rate,capacity,equal\n";
  bool all_equal = true;
  for (int k = k_min; k <= k_max; ++k) {
    const int lo = m_min.value_or(model == Model::kI ? 0 : 1);
    const int hi = m_max.value_or(model == Model::kI ? k - 1 : k);
    for (int m = lo; m <= hi; ++m) {
      if (!ValidateInstance(model, k, m).ok()) continue;
      const RateReport r = OrFail(MeasureRate(model, k, m));
      all_equal = all_equal && r.equal;
      out << ModelName(model) << "," << k << "," << m << "," << r.elements << ","
          << r.measured.ToString() << "," << r.capacity.ToString() << ","
          << (r.equal ? "true" : "false") << "\n";
    }
  }
  return all_equal ? kExitPass : kExitCheckFailed;
}

int CmdPmfDump(const std::string& kind, int k, int m, std::ostream& out) {
  json j = {{"kind", kind}, {"K", k}, {"M", m}};
  if (kind == "rp") {
    j["distribution"] = ToJson(OrUsage(ComputeRpDistribution(k, m)));
  } else if (kind == "case2" || kind == "case3") {
    const auto law = OrUsage(kind == "case2" ? Case2Pmf(k, m) : Case3Pmf(k, m));
    json masses = json::array();
    Rational total = 0;
    for (const auto& [v, p] : law) {
      masses.push_back({{"value", v}, {"p", RationalJson(p)}});
      total += p;
    }
    j["masses"] = masses;
    j["sum"] = RationalJson(total);
  } else {
    Usage("--kind must be rp, case2 or case3");
  }
  out << j.dump(2) << "\n";
  return kExitPass;
}

int CmdDbGen(const Instance& in, const std::string& path, std::ostream& out) {
  if (in.k < 1) Usage("--k must be at least 1");
  if (path.empty()) Usage("--out is required");
  const FieldParamsPtr params = in.Field();
  Rng rng(in.seed);
  const Database db = Database::Random(params, static_cast<uint32_t>(in.k), rng);
  const absl::Status s = db.Save(path);
  if (!s.ok()) throw Failure{kExitCheckFailed, s.ToString()};
  out << "wrote " << in.k << " messages over " << params->ToString() << " to " << path << "\n";
  return kExitPass;
}

int CmdServe(const std::string& db_path, int port, const std::string& bind, std::ostream& out) {
  if (port < 0 || port > 65535) Usage("--port must lie in [0, 65535]");
  auto db = std::make_shared<const Database>(OrUsage(Database::Load(db_path)));
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);  // inherited by server threads
  auto server = OrFail(Server::Start(db, static_cast<uint16_t>(port), bind));
  out << "serving " << db->size() << " messages over " << db->params()->ToString() << " on "
      << bind << ":" << server->port() << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server->Stop();
  out << "stopped after " << server->queries_answered() << " answered and "
      << server->queries_rejected() << " rejected queries" << std::endl;
  return kExitPass;
}

int CmdFetch(const Instance& in, const std::string& host, int port, const std::string& db_path,
             std::ostream& out) {
  if (port <= 0 || port > 65535) Usage("--port must lie in [1, 65535]");
  const Model model = in.ParsedModel();
  const Database db = OrUsage(Database::Load(db_path));
  OrUsage(ValidateInstance(model, static_cast<int>(db.size()), in.m));
  Client client = OrFail(Client::Connect(host, static_cast<uint16_t>(port)));
  const DatabaseInfo info = OrFail(client.Hello());
  const FieldParamsPtr& params = db.params();
  if (info.q != params->q() || info.m != params->m() || info.num_messages != db.size()) {
    throw Failure{kExitCheckFailed,
                  absl::StrCat("server holds K=", info.num_messages, " over GF(", info.q, "^",
                               info.m, "), local copy differs")};
  }
  const int K = static_cast<int>(db.size());
  Rng rng(in.seed);
  const Scenario sc = OrUsage(SampleScenario(db, in.m, model, rng));
  const Protocol protocol = OrUsage(Protocol::Create(model, K, in.m));
  SeededSource source(rng);
  const BuiltQuery built = OrFail(protocol.Build(sc, source));
  const Answer answer = OrFail(client.Fetch(built.query, params));
  const FieldElement decoded = OrFail(RecoverDemand(answer, built.state));
  const bool pass = decoded == db.message(sc.demand);
  out << "fetched " << answer.values.size() << " element(s) for W=" << sc.demand << " (model "
      << ModelName(model) << ", M=" << in.m << "): decoded " << decoded.ToString() << ", expected "
      << db.message(sc.demand).ToString() << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

json RationalJson(const Rational& r) {
  return {{"num", NumeratorString(r)}, {"den", DenominatorString(r)}};
}

json ToJson(const PosteriorReport& report) {
  json rows = json::array();
  for (const PosteriorRow& row : report.rows) {
    json posterior = json::array();
    for (const Rational& p : row.posterior) posterior.push_back(RationalJson(p));
    rows.push_back({{"sets", row.fingerprint}, {"posterior", posterior}});
  }
  return {{"mode", "exact"},
          {"model", std::string(ModelName(report.model))},
          {"K", report.num_messages},
          {"M", report.side_size},
          {"branches", report.branches},
          {"uniform", report.uniform},
          {"worst_deviation", RationalJson(report.worst_deviation)},
          {"fingerprints", rows}};
}

json ToJson(const MonteCarloReport& report) {
  json tests = json::array();
  for (const ChiSquareResult& t : report.tests) {
    tests.push_back({{"name", t.name},
                     {"statistic", t.statistic},
                     {"dof", t.dof},
                     {"p_value", t.p_value}});
  }
  return {{"mode", "monte_carlo"},
          {"model", std::string(ModelName(report.model))},
          {"K", report.num_messages},
          {"M", report.side_size},
          {"trials", report.trials},
          {"fingerprints", report.fingerprints},
          {"family_alpha", report.family_alpha},
          {"threshold", report.threshold},
          {"min_p_value", report.min_p_value},
          {"uniform", report.passed},
          {"tests", tests}};
}

json ToJson(const RateReport& report) {
  return {{"model", std::string(ModelName(report.model))},
          {"K", report.num_messages},
          {"M", report.side_size},
          {"elements_downloaded", report.elements},
          {"measured_rate", report.measured.ToString()},
          {"capacity", report.capacity.ToString()},
          {"equal", report.equal}};
}

json ToJson(const RpDistribution& dist) {
  json table = json::array();
  Rational total = 0;
  for (const auto& [point, p] : dist.table) {
    table.push_back({{"s", point.first}, {"r", point.second}, {"p", RationalJson(p)}});
    total += p;
  }
  json alpha = json::object();
  for (const auto& [r, a] : dist.alpha) alpha[std::to_string(r)] = RationalJson(a);
  json partition = json::object();
  for (const auto& [r, p] : dist.partition) partition[std::to_string(r)] = RationalJson(p);
  return {{"n", dist.set_count},  {"l", dist.duplicates},      {"P", RationalJson(dist.normalizer)},
          {"table", table},       {"sum", RationalJson(total)}, {"alpha", alpha},
          {"partition", partition}};
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-server private information retrieval with coded side information"};
  app.require_subcommand(1);

  Instance demo_in;
  bool reveal = false;
  std::string format = "human";
  CLI::App* demo = app.add_subcommand("demo", "run one build, answer and decode round");
  demo_in.AddFlags(demo, true);
  demo->add_flag("--reveal", reveal, "annotate each query set with its role");
  demo->add_option("--format", format, "human or json")->capture_default_str();

  Instance audit_in;
  bool exact = false, mc = false;
  long long trials = 100000;
  long long max_branches = kDefaultMaxExactBranches;
  std::string mutation = "none";
  std::string output;
  CLI::App* audit = app.add_subcommand("audit", "privacy and rate audit, JSON report");
  audit_in.AddFlags(audit, false);
  audit->add_flag("--exact", exact, "exhaustive enumeration with exact posteriors");
  audit->add_flag("--mc", mc, "Monte-Carlo chi-square tests");
  audit->add_option("--trials", trials, "Monte-Carlo trials")->capture_default_str();
  audit->add_option("--max-branches", max_branches, "exact enumeration limit")->capture_default_str();
  audit->add_option("--mutation", mutation, "none, unshuffled, deterministic-extras, skewed-pmf")
      ->capture_default_str();
  audit->add_option("--output", output, "report path (default stdout)");

  std::string sweep_model = "I";
  int k_min = 2, k_max = 12;
  std::optional<int> m_min, m_max;
  CLI::App* sweep = app.add_subcommand("sweep", "measured rate against capacity, CSV");
  sweep->add_option("--model", sweep_model, "I or II")->capture_default_str();
  sweep->add_option("--k-min", k_min)->capture_default_str();
  sweep->add_option("--k-max", k_max)->capture_default_str();
  sweep->add_option("--m-min", m_min, "default: smallest valid M");
  sweep->add_option("--m-max", m_max, "default: largest valid M");

  std::string kind = "rp";
  int pmf_k = 5, pmf_m = 1;
  CLI::App* pmf = app.add_subcommand("pmf", "probability distributions");
  pmf->require_subcommand(1);
  CLI::App* pmf_dump = pmf->add_subcommand("dump", "print a distribution as exact JSON");
  pmf_dump->add_option("--kind", kind, "rp, case2 or case3")->capture_default_str();
  pmf_dump->add_option("--k", pmf_k)->capture_default_str();
  pmf_dump->add_option("--m", pmf_m)->capture_default_str();

  std::string db_path;
  int port = DefaultPort();
  std::string bind = "127.0.0.1";
  CLI::App* serve = app.add_subcommand("serve", "answer queries over TCP");
  serve->add_option("--db", db_path, "database file")->required();
  serve->add_option("--port", port, "listen port (default from PIRCSI_PORT)")->capture_default_str();
  serve->add_option("--bind", bind)->capture_default_str();

  Instance fetch_in;
  std::string host = "127.0.0.1";
  std::string fetch_db;
  int fetch_port = DefaultPort();
  CLI::App* fetch = app.add_subcommand("fetch", "retrieve one message from a server");
  fetch->add_option("--model", fetch_in.model)->capture_default_str();
  fetch->add_option("--m", fetch_in.m, "side-information size M")->capture_default_str();
  fetch->add_option("--seed", fetch_in.seed)->capture_default_str();
  fetch->add_option("--host", host)->capture_default_str();
  fetch->add_option("--port", fetch_port, "server port (default from PIRCSI_PORT)")
      ->capture_default_str();
  fetch->add_option("--db", fetch_db, "local copy used to form the side information")->required();

  Instance gen_in;
  std::string gen_out;
  CLI::App* db = app.add_subcommand("db", "database files");
  db->require_subcommand(1);
  CLI::App* db_gen = db->add_subcommand("gen", "write a random database");
  db_gen->add_option("--k", gen_in.k)->capture_default_str();
  db_gen->add_option("--q", gen_in.q)->capture_default_str();
  db_gen->add_option("--degree", gen_in.degree)->capture_default_str();
  db_gen->add_option("--seed", gen_in.seed)->capture_default_str();
  db_gen->add_option("--out", gen_out)->required();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (demo->parsed()) return CmdDemo(demo_in, reveal, format, out);
    if (audit->parsed()) {
      return CmdAudit(audit_in, exact, mc, trials, max_branches, mutation, output, out);
    }
    if (sweep->parsed()) return CmdSweep(sweep_model, k_min, k_max, m_min, m_max, out);
    if (pmf_dump->parsed()) return CmdPmfDump(kind, pmf_k, pmf_m, out);
    if (serve->parsed()) return CmdServe(db_path, port, bind, out);
    if (fetch->parsed()) return CmdFetch(fetch_in, host, fetch_port, fetch_db, out);
    if (db_gen->parsed()) return CmdDbGen(gen_in, gen_out, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  }
  return kExitUsage;
}

}  // namespace pircsi::cli
