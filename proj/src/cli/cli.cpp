// Copyright 2026 The DSR Workbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsr/cli/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "dsr/agreement/agreement.hpp"
#include "dsr/analytics/corpus_stats.hpp"
#include "dsr/analytics/themes.hpp"
#include "dsr/cli/manifest.hpp"
#include "dsr/core/corpus_io.hpp"
#include "dsr/scorer/augment.hpp"
#include "dsr/scorer/train.hpp"
#include "dsr/service/http.hpp"
#include "dsr/spaneval/spaneval.hpp"
#include "dsr/util/key_values.hpp"

namespace dsr::cli {
namespace {

namespace fs = std::filesystem;
using jsonl::OrderedJson;

// Values from the file named by DSR_CONFIG; flags override them.
class Defaults {
 public:
  static Defaults from_environment() {
    Defaults d;
    const char* path = std::getenv("DSR_CONFIG");
    if (path == nullptr || *path == '\0') return d;
    d.values_ = util::parse_key_values(jsonl::read_file(path), path);
    static const std::set<std::string> kKnown = {
        "h",     "text_max", "span_max",         "hidden",        "lr",          "beta1",
        "beta2", "eps",      "epochs",           "batch_size",    "seed",        "sigma",
        "haldane", "min_target_count", "top_k_targets", "top_k_pairs", "sd_threshold", "bins"};
    for (const auto& [key, value] : d.values_) {
      if (!kKnown.count(key)) {
        throw ValidationError(std::string(path) + ": unknown key '" + key + "'");
      }
    }
    return d;
  }

  scorer::ScorerConfig scorer() const {
    scorer::ScorerConfig cfg;
    for (const auto& [key, value] : values_) {
      if (is_scorer_key(key)) scorer::apply_config_value(cfg, key, value);
    }
    return cfg;
  }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if constexpr (std::is_same_v<T, bool>) {
      if (it->second == "true" || it->second == "1") return true;
      if (it->second == "false" || it->second == "0") return false;
      throw ValidationError("DSR_CONFIG: bad boolean for " + key);
    } else {
      std::istringstream in(it->second);
      T v{};
      if (!(in >> v) || !in.eof()) throw ValidationError("DSR_CONFIG: bad value for " + key);
      return v;
    }
  }

 private:
  static bool is_scorer_key(const std::string& key) {
    static const std::set<std::string> kScorer = {"h",     "text_max", "span_max",   "hidden",
                                                  "lr",    "beta1",    "beta2",      "eps",
                                                  "epochs", "batch_size", "seed"};
    return kScorer.count(key) > 0;
  }
  std::map<std::string, std::string> values_;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  Defaults defaults;
};

void write_json(const fs::path& path, const OrderedJson& j) {
  jsonl::write_file(path, j.dump(2) + "\n");
}

std::vector<std::string> read_lexicon(const fs::path& path) {
  return scorer::load_lexicon_lines(jsonl::read_file(path));
}

analytics::CategoryLexicon lexicon_from(const std::string& path, RunManifest& m) {
  if (path.empty()) return analytics::CategoryLexicon::defaults();
  m.input(path);
  return analytics::CategoryLexicon::load(path);
}

// Options shared by the analytics subcommands.
struct AnalyticsFlags {
  std::optional<double> sigma;
  std::optional<std::size_t> min_count;
  std::optional<std::size_t> top;
  bool no_haldane = false;
  std::string lexicon;
};

analytics::AnalyticsConfig resolve(const AnalyticsFlags& f, const Defaults& d) {
  analytics::AnalyticsConfig c;
  c.sigma = f.sigma.value_or(d.get("sigma", c.sigma));
  c.min_target_count = f.min_count.value_or(d.get("min_target_count", c.min_target_count));
  c.top_k_targets = d.get("top_k_targets", c.top_k_targets);
  c.top_k_pairs = d.get("top_k_pairs", c.top_k_pairs);
  c.haldane = f.no_haldane ? false : d.get("haldane", c.haldane);
  c.validate();
  return c;
}

void record(RunManifest& m, const analytics::AnalyticsConfig& c) {
  m.config("sigma", c.sigma);
  m.config("min_target_count", c.min_target_count);
  m.config("top_k_targets", c.top_k_targets);
  m.config("top_k_pairs", c.top_k_pairs);
  m.config("haldane", c.haldane);
}

// ---- agreement -----------------------------------------------------------

struct AgreementArgs {
  std::string annotations, out;
};

void cmd_agreement(const AgreementArgs& a, Context& ctx) {
  RunManifest m("agreement");
  m.input(a.annotations);
  const auto report = agreement::agreement_report(read_annotations(a.annotations));
  write_json(a.out, agreement::report_to_json(report));
  ctx.out << agreement::report_table(report);
  m.output(a.out);
  m.write(a.out);
}

// ---- aggregate -----------------------------------------------------------

struct AggregateArgs {
  std::string corpus, annotations, out, flagged;
  std::optional<double> sd_threshold;
};

void cmd_aggregate(const AggregateArgs& a, Context& ctx) {
  RunManifest m("aggregate");
  m.input(a.corpus);
  m.input(a.annotations);
  const double sd = a.sd_threshold.value_or(
      ctx.defaults.get("sd_threshold", agreement::kDefaultSdThreshold));
  if (!(sd >= 0.0)) throw ValidationError("sd threshold must be >= 0");
  m.config("sd_threshold", sd);
  const Corpus corpus = read_corpus(a.corpus);
  auto result = agreement::aggregate_scores(corpus, read_annotations(a.annotations), sd);
  Corpus labeled;
  labeled.name = corpus.name;
  labeled.texts = corpus.texts;
  labeled.spans = std::move(result.spans);
  write_corpus(labeled, a.out);
  m.output(a.out);
  const fs::path flagged = a.flagged.empty() ? fs::path(a.out + ".flagged.json") : fs::path(a.flagged);
  write_json(flagged, agreement::flagged_to_json(result.flagged));
  m.output(flagged);
  ctx.out << labeled.spans.size() << " spans aggregated, " << result.flagged.size()
          << " units flagged\n";
  m.write(a.out);
}

// ---- eval-spans ----------------------------------------------------------

struct EvalSpansArgs {
  std::string gold, pred, out;
};

void cmd_eval_spans(const EvalSpansArgs& a, Context& ctx) {
  RunManifest m("eval-spans");
  m.input(a.gold);
  m.input(a.pred);
  const Corpus gold = read_corpus(a.gold);
  std::vector<Span> gold_spans;
  for (const auto& s : gold.spans) gold_spans.push_back(s.span);
  const auto report = spaneval::evaluate_spans(gold.texts, gold_spans, read_predictions(a.pred, gold));
  write_json(a.out, spaneval::report_to_json(report));
  ctx.out << spaneval::report_table(report);
  m.output(a.out);
  m.write(a.out);
}

// ---- embed ---------------------------------------------------------------

struct EmbedArgs {
  std::string corpus, out;
  std::optional<std::size_t> h, text_max;
};

void cmd_embed(const EmbedArgs& a, Context& ctx) {
  RunManifest m("embed");
  m.input(a.corpus);
  scorer::ScorerConfig cfg = ctx.defaults.scorer();
  if (a.h) cfg.h = *a.h;
  if (a.text_max) cfg.text_max = *a.text_max;
  cfg.validate();
  m.config("h", cfg.h);
  m.config("text_max", cfg.text_max);
  const Corpus corpus = read_corpus(a.corpus);
  std::vector<scorer::EmbeddedText> embedded;
  embedded.reserve(corpus.texts.size());
  for (const auto& t : corpus.texts) embedded.push_back(scorer::embed_test(t, cfg.h, cfg.text_max));
  scorer::write_embeddings(embedded, fs::path(a.out));
  m.output(a.out);
  ctx.out << embedded.size() << " texts embedded\n";
  m.write(a.out);
}

// ---- train ---------------------------------------------------------------

struct TrainArgs {
  std::string embeddings, labels, config, out, history;
  std::optional<std::size_t> h, hidden, epochs, batch_size;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr;
};

void cmd_train(const TrainArgs& a, Context& ctx) {
  RunManifest m("train");
  m.input(a.embeddings);
  m.input(a.labels);
  scorer::ScorerConfig cfg = ctx.defaults.scorer();
  if (!a.config.empty()) {
    m.input(a.config);
    cfg = scorer::load_config(a.config, cfg);
  }
  if (a.h) cfg.h = *a.h;
  if (a.hidden) cfg.hidden = *a.hidden;
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.batch_size) cfg.batch_size = *a.batch_size;
  if (a.seed) cfg.seed = *a.seed;
  if (a.lr) cfg.lr = *a.lr;
  cfg.validate();
  m.config("scorer", scorer::config_to_json(cfg));

  const auto embeddings = scorer::load_embeddings(a.embeddings, cfg.h);
  const auto dataset = scorer::build_dataset(read_corpus(a.labels), embeddings, cfg);
  const auto result = scorer::train(dataset.batch, cfg);
  scorer::save_checkpoint(result.head, cfg, a.out);
  m.output(a.out);
  if (!a.history.empty()) {
    std::ostringstream csv;
    csv << "epoch,loss,best\n";
    char buf[96];
    for (std::size_t e = 0; e < result.history.epoch_loss.size(); ++e) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", e + 1, result.history.epoch_loss[e],
                    result.history.smoothed[e]);
      csv << buf;
    }
    jsonl::write_file(a.history, csv.str());
    m.output(a.history);
  }
  ctx.out << "trained on " << dataset.batch.size() << " spans for " << cfg.epochs
          << " epochs; final loss " << result.history.epoch_loss.back() << "\n";
  m.write(a.out);
}

// ---- eval-scores ---------------------------------------------------------

struct EvalScoresArgs {
  std::string model, embeddings, labels, out, scored;
};

void cmd_eval_scores(const EvalScoresArgs& a, Context& ctx) {
  RunManifest m("eval-scores");
  m.input(a.model);
  m.input(a.embeddings);
  m.input(a.labels);
  const auto [head, cfg] = scorer::load_checkpoint(a.model);
  m.config("scorer", scorer::config_to_json(cfg));
  const auto embeddings = scorer::load_embeddings(a.embeddings, cfg.h);
  const Corpus labels = read_corpus(a.labels);
  const auto dataset = scorer::build_dataset(labels, embeddings, cfg);
  const auto scores = scorer::evaluate_scores(head, dataset.batch);
  OrderedJson j;
  j["n_spans"] = dataset.batch.size();
  j["dimensions"] = scorer::scores_to_json(scores);
  write_json(a.out, j);
  m.output(a.out);
  if (!a.scored.empty()) {
    write_corpus(scorer::score_corpus(head, labels, embeddings, cfg), a.scored);
    m.output(a.scored);
  }
  ctx.out << scorer::scores_table(scores);
  m.write(a.out);
}

// ---- augment -------------------------------------------------------------

struct AugmentArgs {
  std::string corpus, char_lexicon, topic_lexicon, out;
};

void cmd_augment(const AugmentArgs& a, Context& ctx) {
  RunManifest m("augment");
  m.input(a.corpus);
  m.input(a.char_lexicon);
  m.input(a.topic_lexicon);
  const Corpus corpus = read_corpus(a.corpus);
  const Corpus augmented =
      scorer::augment_corpus(corpus, read_lexicon(a.char_lexicon), read_lexicon(a.topic_lexicon));
  augmented.validate();
  write_corpus(augmented, a.out);
  m.output(a.out);
  ctx.out << augmented.texts.size() - corpus.texts.size() << " variants written\n";
  m.write(a.out);
}

// ---- log odds (simple and composite) -----------------------------------

struct LogOddsArgs {
  std::string corpus, bin_label, out;
  std::vector<std::string> others;
  AnalyticsFlags flags;
};

struct Populations {
  std::vector<analytics::LabeledSpan> in, out;
  OrderedJson description;
};

Populations populations(const LogOddsArgs& a, const analytics::CategoryLexicon& lexicon,
                        const analytics::AnalyticsConfig& cfg, RunManifest& m,
                        std::optional<OrderedJson>* bin_report) {
  m.input(a.corpus);
  const Corpus corpus = read_corpus(a.corpus);
  Populations p;
  if (!a.bin_label.empty()) {
    if (!a.others.empty()) throw ValidationError("--bin-label and --other are exclusive");
    const auto bins = analytics::bin_high_low(corpus.texts, a.bin_label);
    p.in = analytics::label_spans(corpus, bins.high, lexicon, cfg.sigma);
    p.out = analytics::label_spans(corpus, bins.low, lexicon, cfg.sigma);
    p.description = {{"in", "High " + a.bin_label},
                     {"out", "Low " + a.bin_label},
                     {"high_texts", bins.high.size()},
                     {"low_texts", bins.low.size()}};
    if (bin_report != nullptr) {
      *bin_report = analytics::bin_tests_to_json(analytics::bin_tests(corpus, bins, lexicon));
    }
    return p;
  }
  if (a.others.empty()) throw ValidationError("give --other corpora or --bin-label");
  p.in = analytics::label_spans(corpus, lexicon, cfg.sigma);
  auto names = OrderedJson::array();
  for (const auto& path : a.others) {
    m.input(path);
    const Corpus other = read_corpus(path);
    names.push_back(other.name);
    for (auto& s : analytics::label_spans(other, lexicon, cfg.sigma)) p.out.push_back(s);
  }
  p.description = {{"in", corpus.name}, {"out", names}};
  return p;
}

OrderedJson run_predicates(const std::vector<analytics::Predicate>& predicates,
                           const Populations& pop, const analytics::CategoryLexicon& lexicon,
                           bool haldane) {
  auto results = OrderedJson::array();
  for (const auto& pred : predicates) {
    const std::string name = analytics::describe(pred, lexicon);
    try {
      results.push_back(
          analytics::log_odds_to_json(name, analytics::attribute_log_odds(pop.in, pop.out, pred, haldane)));
    } catch (const UndefinedStatistic& e) {
      results.push_back({{"attribute", name}, {"log_odds", nullptr}, {"undefined", e.what()}});
    }
  }
  return results;
}

void cmd_logodds(const LogOddsArgs& a, Context& ctx, bool composite) {
  RunManifest m(composite ? "analyze-composite" : "analyze-logodds");
  const auto cfg = resolve(a.flags, ctx.defaults);
  record(m, cfg);
  const auto lexicon = lexicon_from(a.flags.lexicon, m);
  std::optional<OrderedJson> bin_report;
  const Populations pop = populations(a, lexicon, cfg, m, composite ? nullptr : &bin_report);

  std::vector<analytics::Predicate> predicates;
  if (!composite) {
    for (auto l : analytics::kAllLabels) predicates.push_back(analytics::Predicate::simple(l));
  } else {
    for (std::size_t i = 0; i < analytics::kAllLabels.size(); ++i) {
      for (std::size_t j = i + 1; j < analytics::kAllLabels.size(); ++j) {
        const auto x = analytics::kAllLabels[i];
        const auto y = analytics::kAllLabels[j];
        if (analytics::dimension_of(x) != analytics::dimension_of(y)) {
          predicates.push_back(analytics::Predicate::joint(x, y));
        }
      }
    }
    for (auto l : analytics::kAllLabels) {
      for (std::size_t c = 0; c < lexicon.categories().size(); ++c) {
        predicates.push_back(analytics::Predicate::conditional(l, c));
      }
    }
  }

  OrderedJson j;
  j["populations"] = pop.description;
  j["n_in"] = pop.in.size();
  j["n_out"] = pop.out.size();
  j["results"] = run_predicates(predicates, pop, lexicon, cfg.haldane);
  if (bin_report) j["bin_tests"] = *bin_report;
  write_json(a.out, j);
  m.output(a.out);
  for (const auto& r : j["results"]) {
    ctx.out << r["attribute"].get<std::string>() << '\t';
    if (r["log_odds"].is_null()) {
      ctx.out << "n/a\n";
    } else {
      ctx.out << r["log_odds"].get<double>() << '\t' << r["p"].get<double>() << '\t'
              << r["stars"].get<std::string>() << '\n';
    }
  }
  m.write(a.out);
}

// ---- analyze-targets -----------------------------------------------------

struct TargetsArgs {
  std::string corpus, out;
  std::vector<std::string> others;
  AnalyticsFlags flags;
};

void cmd_targets(const TargetsArgs& a, Context& ctx) {
  RunManifest m("analyze-targets");
  auto cfg = resolve(a.flags, ctx.defaults);
  if (a.flags.top) cfg.top_k_targets = *a.flags.top;
  cfg.validate();
  record(m, cfg);
  m.input(a.corpus);
  const Corpus corpus = read_corpus(a.corpus);
  std::vector<Corpus> others;
  for (const auto& path : a.others) {
    m.input(path);
    others.push_back(read_corpus(path));
  }
  const auto deltas = analytics::target_deltas(corpus, others, cfg);
  OrderedJson j;
  j["corpus"] = corpus.name;
  j["targets"] = analytics::target_deltas_to_json(deltas);
  write_json(a.out, j);
  m.output(a.out);
  for (const auto& d : deltas) {
    ctx.out << d.target << '\t' << d.median_in << '\t' << d.median_out << '\t' << d.delta << '\n';
  }
  m.write(a.out);
}

// ---- analyze-pairwise / export-graph -------------------------------------

std::string graph_format(const std::string& flag, const std::string& out) {
  if (!flag.empty()) return flag;
  return fs::path(out).extension() == ".json" ? "json" : "dot";
}

struct PairwiseArgs {
  std::string corpus, out, format;
  AnalyticsFlags flags;
};

void cmd_pairwise(const PairwiseArgs& a, Context& ctx) {
  RunManifest m("analyze-pairwise");
  auto cfg = resolve(a.flags, ctx.defaults);
  if (a.flags.top) cfg.top_k_pairs = *a.flags.top;
  cfg.validate();
  record(m, cfg);
  const auto lexicon = lexicon_from(a.flags.lexicon, m);
  m.input(a.corpus);
  const auto graph = analytics::pairwise_themes(read_corpus(a.corpus), cfg, lexicon);
  const std::string format = graph_format(a.format, a.out);
  m.config("format", format);
  jsonl::write_file(a.out, analytics::export_graph(graph, format));
  m.output(a.out);
  ctx.out << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges\n";
  m.write(a.out);
}

struct ExportGraphArgs {
  std::string graph, out, format;
};

void cmd_export_graph(const ExportGraphArgs& a, Context&) {
  RunManifest m("export-graph");
  m.input(a.graph);
  analytics::ThemeGraph graph;
  try {
    graph = analytics::graph_from_json(jsonl::Json::parse(jsonl::read_file(a.graph)));
  } catch (const jsonl::Json::exception& e) {
    throw ValidationError(a.graph + ": " + e.what());
  }
  const std::string format = graph_format(a.format, a.out);
  m.config("format", format);
  jsonl::write_file(a.out, analytics::export_graph(graph, format));
  m.output(a.out);
  m.write(a.out);
}

// ---- histogram -----------------------------------------------------------

struct HistogramArgs {
  std::string corpus, dim = "OA", out;
  std::optional<std::size_t> bins;
};

void cmd_histogram(const HistogramArgs& a, Context& ctx) {
  RunManifest m("histogram");
  m.input(a.corpus);
  const Dimension dim = parse_dimension(a.dim);
  const std::size_t bins = a.bins.value_or(ctx.defaults.get<std::size_t>("bins", 20));
  m.config("dim", std::string(to_string(dim)));
  m.config("bins", bins);
  jsonl::write_file(a.out, analytics::export_histogram(
                               analytics::dimension_scores(read_corpus(a.corpus), dim), dim, bins));
  m.output(a.out);
  m.write(a.out);
}

// ---- serve ---------------------------------------------------------------

struct ServeArgs {
  std::string log, corpus, host = "127.0.0.1";
  int port = 8080;
};

service::HttpServer* g_server = nullptr;

extern "C" void stop_server(int) {
  if (g_server != nullptr) g_server->stop();
}

void cmd_serve(const ServeArgs& a, Context& ctx) {
  RunManifest m("serve");
  m.config("host", a.host);
  m.config("port", a.port);
  service::AnnotationService svc(a.log);
  if (!a.corpus.empty()) {
    m.input(a.corpus);
    svc.load_corpus(read_corpus(a.corpus));
  }
  service::HttpServer server(svc);
  if (!server.bind(a.host, a.port)) {
    throw ValidationError("cannot bind " + a.host + ":" + std::to_string(a.port));
  }
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  ctx.err << "serving on http://" << a.host << ":" << a.port << "\n";
  server.run();
  g_server = nullptr;
  m.output(a.log);
  m.write(a.log);
}

void require_existing(CLI::Option* opt) { opt->required()->check(CLI::ExistingFile); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directed social regard workbench"};
  app.name(args.empty() ? "dsr" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  std::function<void(Context&)> action;
  auto bind = [&](CLI::App* sub, auto& state, auto fn) {
    sub->callback([&action, &state, fn] { action = [&state, fn](Context& c) { fn(state, c); }; });
  };
  auto analytics_flags = [](CLI::App* sub, AnalyticsFlags& f, bool with_lexicon) {
    sub->add_option("--sigma", f.sigma, "Label threshold (default 0.15)");
    if (with_lexicon) {
      sub->add_option("--lexicon", f.lexicon, "Category lexicon JSON")->check(CLI::ExistingFile);
    }
  };

  AgreementArgs agreement_args;
  auto* s = app.add_subcommand("agreement", "Krippendorff's alpha per dimension");
  require_existing(s->add_option("--annotations", agreement_args.annotations, "annotations.jsonl"));
  s->add_option("--out", agreement_args.out, "Report JSON")->required();
  bind(s, agreement_args, cmd_agreement);

  AggregateArgs aggregate_args;
  s = app.add_subcommand("aggregate", "Mean scores per span with SD flagging");
  require_existing(s->add_option("--corpus", aggregate_args.corpus, "Spans to aggregate"));
  require_existing(s->add_option("--annotations", aggregate_args.annotations, "annotations.jsonl"));
  s->add_option("--sd-threshold", aggregate_args.sd_threshold, "Flag units above this SD (0.5)");
  s->add_option("--flagged", aggregate_args.flagged, "Flagged-unit JSON");
  s->add_option("--out", aggregate_args.out, "Labeled corpus")->required();
  bind(s, aggregate_args, cmd_aggregate);

  EvalSpansArgs eval_spans_args;
  s = app.add_subcommand("eval-spans", "Strict and token-level span metrics");
  require_existing(s->add_option("--gold", eval_spans_args.gold, "Gold corpus"));
  require_existing(s->add_option("--pred", eval_spans_args.pred, "predictions.jsonl"));
  s->add_option("--out", eval_spans_args.out, "Report JSON")->required();
  bind(s, eval_spans_args, cmd_eval_spans);

  EmbedArgs embed_args;
  s = app.add_subcommand("embed", "Deterministic test embeddings");
  require_existing(s->add_option("--corpus", embed_args.corpus, "Corpus"));
  s->add_option("--width", embed_args.h, "Embedding width h");
  s->add_option("--text-max", embed_args.text_max, "Maximum tokens per text");
  s->add_option("--out", embed_args.out, "embeddings.jsonl")->required();
  bind(s, embed_args, cmd_embed);

  TrainArgs train_args;
  s = app.add_subcommand("train", "Train the span regard scorer");
  require_existing(s->add_option("--embeddings", train_args.embeddings, "embeddings.jsonl"));
  require_existing(s->add_option("--labels", train_args.labels, "Labeled corpus"));
  s->add_option("--config", train_args.config, "key=value training config")->check(CLI::ExistingFile);
  s->add_option("--width", train_args.h, "Embedding width h");
  s->add_option("--hidden", train_args.hidden, "Hidden width");
  s->add_option("--epochs", train_args.epochs, "Epochs");
  s->add_option("--batch-size", train_args.batch_size, "Batch size");
  s->add_option("--seed", train_args.seed, "Initialisation seed");
  s->add_option("--lr", train_args.lr, "Adam learning rate");
  s->add_option("--history", train_args.history, "Loss history CSV");
  s->add_option("--out", train_args.out, "Checkpoint JSON")->required();
  bind(s, train_args, cmd_train);

  EvalScoresArgs eval_scores_args;
  s = app.add_subcommand("eval-scores", "RMSE and R^2 of a checkpoint");
  require_existing(s->add_option("--model", eval_scores_args.model, "Checkpoint JSON"));
  require_existing(s->add_option("--embeddings", eval_scores_args.embeddings, "embeddings.jsonl"));
  require_existing(s->add_option("--labels", eval_scores_args.labels, "Labeled corpus"));
  s->add_option("--scored", eval_scores_args.scored, "Write a model-scored corpus here");
  s->add_option("--out", eval_scores_args.out, "Report JSON")->required();
  bind(s, eval_scores_args, cmd_eval_scores);

  AugmentArgs augment_args;
  s = app.add_subcommand("augment", "Lexicon substitution variants");
  require_existing(s->add_option("--corpus", augment_args.corpus, "Labeled corpus"));
  require_existing(s->add_option("--char-lexicon", augment_args.char_lexicon, "One entry per line"));
  require_existing(s->add_option("--topic-lexicon", augment_args.topic_lexicon, "One entry per line"));
  s->add_option("--out", augment_args.out, "Augmented corpus")->required();
  bind(s, augment_args, cmd_augment);

  LogOddsArgs logodds_args;
  s = app.add_subcommand("analyze-logodds", "Log odds of each regard label");
  require_existing(s->add_option("--corpus", logodds_args.corpus, "In-corpus"));
  s->add_option("--other", logodds_args.others, "Comparison corpora")->check(CLI::ExistingFile);
  s->add_option("--bin-label", logodds_args.bin_label, "Compare High against Low texts of a doc label");
  s->add_flag("--no-haldane", logodds_args.flags.no_haldane, "Disable the zero-cell correction");
  analytics_flags(s, logodds_args.flags, true);
  s->add_option("--out", logodds_args.out, "Report JSON")->required();
  s->callback([&] { action = [&](Context& c) { cmd_logodds(logodds_args, c, false); }; });

  LogOddsArgs composite_args;
  s = app.add_subcommand("analyze-composite", "Log odds of joint and conditional attributes");
  require_existing(s->add_option("--corpus", composite_args.corpus, "In-corpus"));
  s->add_option("--other", composite_args.others, "Comparison corpora")->check(CLI::ExistingFile);
  s->add_option("--bin-label", composite_args.bin_label, "Compare High against Low texts of a doc label");
  s->add_flag("--no-haldane", composite_args.flags.no_haldane, "Disable the zero-cell correction");
  analytics_flags(s, composite_args.flags, true);
  s->add_option("--out", composite_args.out, "Report JSON")->required();
  s->callback([&] { action = [&](Context& c) { cmd_logodds(composite_args, c, true); }; });

  TargetsArgs targets_args;
  s = app.add_subcommand("analyze-targets", "Median OA deltas per target");
  require_existing(s->add_option("--corpus", targets_args.corpus, "In-corpus"));
  s->add_option("--other", targets_args.others, "Comparison corpora")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--min-count", targets_args.flags.min_count, "Minimum occurrences per side (20)");
  s->add_option("--top", targets_args.flags.top, "Targets to keep (15)");
  s->add_option("--out", targets_args.out, "Report JSON")->required();
  bind(s, targets_args, cmd_targets);

  PairwiseArgs pairwise_args;
  s = app.add_subcommand("analyze-pairwise", "Harm/help theme graph");
  require_existing(s->add_option("--corpus", pairwise_args.corpus, "Scored corpus"));
  analytics_flags(s, pairwise_args.flags, true);
  s->add_option("--top", pairwise_args.flags.top, "Edges to keep (40)");
  s->add_option("--format", pairwise_args.format, "dot or json (default from --out)");
  s->add_option("--out", pairwise_args.out, "Graph file")->required();
  bind(s, pairwise_args, cmd_pairwise);

  HistogramArgs histogram_args;
  s = app.add_subcommand("histogram", "Score histogram CSV");
  require_existing(s->add_option("--corpus", histogram_args.corpus, "Scored corpus"));
  s->add_option("--dim", histogram_args.dim, "OA, VA or HH");
  s->add_option("--bins", histogram_args.bins, "Bin count (20)");
  s->add_option("--out", histogram_args.out, "CSV file")->required();
  bind(s, histogram_args, cmd_histogram);

  ServeArgs serve_args;
  s = app.add_subcommand("serve", "Annotation HTTP service");
  s->add_option("--log", serve_args.log, "Append-only annotation log")->required();
  s->add_option("--corpus", serve_args.corpus, "Corpus to load at start")->check(CLI::ExistingFile);
  s->add_option("--host", serve_args.host, "Bind address");
  s->add_option("--port", serve_args.port, "Port");
  bind(s, serve_args, cmd_serve);

  ExportGraphArgs export_args;
  s = app.add_subcommand("export-graph", "Convert a JSON theme graph");
  require_existing(s->add_option("--graph", export_args.graph, "Graph JSON"));
  s->add_option("--format", export_args.format, "dot or json (default from --out)");
  s->add_option("--out", export_args.out, "Output file")->required();
  bind(s, export_args, cmd_export_graph);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("dsr");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (const auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kExitUsage;
  }

  try {
    Context ctx{out, err, Defaults::from_environment()};
    action(ctx);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace dsr::cli
