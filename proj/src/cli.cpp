#include "hybridcast/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"
#include "hybridcast/pipeline.hpp"
#include "hybridcast/prediction.hpp"

namespace hybridcast {
namespace {

namespace fs = std::filesystem;
using pipeline::PipelineConfig;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string require_path(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required input ") + flag);
  if (!fs::exists(value)) throw DataError(std::string(flag) + ": no such file " + value);
  return value;
}

// Every file output goes through here so nothing lands outside the output directory.
class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {}

  fs::path write(const std::string& name, std::string_view content) const {
    fs::create_directories(root_);
    const fs::path path = root_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("cannot write " + path.string());
    return path;
  }

 private:
  fs::path root_;
};

// Flag values stay empty unless given, so they only override the config file when present.
struct Flags {
  std::string config;
  std::optional<std::string> out, format, stock, news, fetch_url, weights, lexicon, scorer_command, alignment,
      granularity;
  std::optional<std::uint64_t> seed, days, epochs, window_length;
  std::optional<double> learning_rate, jump_probability;

  std::string model, predictions, sentiment, records, surrogate, actual, predicted;
};

PipelineConfig resolve(const Flags& f) {
  PipelineConfig cfg;
  if (!f.config.empty()) cfg.apply(ConfigFile::parse(read_file(require_path(f.config, "--config"))));
  if (f.seed) cfg.set_seed(*f.seed);
  if (f.out) cfg.out_dir = *f.out;
  if (f.stock) cfg.stock_csv = *f.stock;
  if (f.news) cfg.news_feed = *f.news;
  if (f.fetch_url) cfg.fetch_url = *f.fetch_url;
  if (f.weights) cfg.weights = *f.weights;
  if (f.lexicon) cfg.lexicon = *f.lexicon;
  if (f.scorer_command) cfg.scorer_command = *f.scorer_command;
  if (f.alignment) cfg.alignment = fusion::parse_alignment(*f.alignment);
  if (f.granularity) cfg.granularity = sentiment::parse_granularity(*f.granularity);
  if (f.days) cfg.synth.days = *f.days;
  if (f.epochs) cfg.train.epochs = *f.epochs;
  if (f.window_length) cfg.window_length = *f.window_length;
  if (f.learning_rate) cfg.train.learning_rate = *f.learning_rate;
  if (f.jump_probability) cfg.synth.jump_probability = *f.jump_probability;
  if (!cfg.weights.empty()) require_path(cfg.weights, "weights");
  if (!cfg.lexicon.empty()) require_path(cfg.lexicon, "lexicon");
  cfg.validate();
  cfg.synth.validate();
  return cfg;
}

OhlcvSeries load_stock(const PipelineConfig& cfg) {
  return load_ohlcv(read_file(require_path(cfg.stock_csv, "--stock")));
}

// `date,value` pairs, one header line.
std::vector<std::pair<Date, double>> read_value_series(const std::string& path) {
  const std::string text = read_file(require_path(path, path.c_str()));
  const auto rows = csv::lines(text);
  std::vector<std::pair<Date, double>> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    const auto fields = csv::split_record(rows[i]);
    const std::string where = path + " line " + std::to_string(i + 1);
    if (fields.size() < 2) throw DataError(where + ": expected date,value");
    out.emplace_back(parse_date(fields[0]), csv::parse_double(fields[1], where));
  }
  return out;
}

struct Context {
  const Flags& flags;
  std::ostream& out;
  std::ostream& err;
  metrics::Format format = metrics::Format::text;

  pipeline::Logger logger() const {
    return [this](const std::string& line) { err << line << '\n' << std::flush; };
  }
};

void cmd_ingest(const Context& ctx, const PipelineConfig& cfg) {
  const OhlcvSeries series = load_stock(cfg);
  const OutputDir dir(cfg.out_dir);
  const auto path = dir.write("ohlcv.csv", write_ohlcv(series));
  const std::size_t windows = window_count(series.size(), cfg.window_length, cfg.horizon, 1);
  ctx.out << "rows," << series.size() << "\nfirst," << format_date(series[0].date) << "\nlast,"
          << format_date(series[series.size() - 1].date) << "\nwindows," << windows << '\n';
  ctx.err << "wrote " << path.string() << '\n';
}

void cmd_find_seqlen(const Context& ctx, const PipelineConfig& cfg) {
  const OhlcvSeries series = load_stock(cfg);
  const std::size_t rows = pipeline::training_rows(series.size(), cfg.test_fraction);
  const auto result = pipeline::find_window_length(series, rows, cfg, ctx.logger());
  const OutputDir dir(cfg.out_dir);
  dir.write("seqlen_trace.csv", seqlen::trace_csv(result.trace));
  ctx.out << "best_length," << result.best_length << "\nbest_performance," << csv::shortest(result.best_performance)
          << "\nevaluations," << result.evaluations << '\n';
}

void cmd_train(const Context& ctx, const PipelineConfig& cfg) {
  const OhlcvSeries series = load_stock(cfg);
  const std::size_t rows = pipeline::training_rows(series.size(), cfg.test_fraction);
  const auto trained = pipeline::train_baseline(series, rows, cfg, ctx.logger());
  const OutputDir dir(cfg.out_dir);
  const auto path = dir.write("model.ckpt", convlstm::save_checkpoint(trained.model));
  std::string history = "epoch,loss\n";
  for (std::size_t i = 0; i < trained.loss_history.size(); ++i) {
    history += std::to_string(i + 1) + "," + csv::shortest(trained.loss_history[i]) + "\n";
  }
  dir.write("loss.csv", history);
  ctx.out << "train_rows," << rows << "\nwindows," << trained.train_windows << "\nfinal_loss,"
          << csv::shortest(trained.loss_history.empty() ? 0.0 : trained.loss_history.back()) << '\n';
  ctx.err << "wrote " << path.string() << '\n';
}

void cmd_predict(const Context& ctx, const PipelineConfig& cfg) {
  const OhlcvSeries series = load_stock(cfg);
  const auto model = convlstm::load_checkpoint(read_file(require_path(ctx.flags.model, "--model")));
  const auto predictions = convlstm::predict_series(model, series);
  const auto path = OutputDir(cfg.out_dir).write("predictions.csv", write_predictions(predictions));
  ctx.out << "predictions," << predictions.size() << '\n';
  ctx.err << "wrote " << path.string() << '\n';
}

void cmd_score_news(const Context& ctx, const PipelineConfig& cfg) {
  std::string feed_text;
  if (!cfg.news_feed.empty()) {
    feed_text = read_file(require_path(cfg.news_feed, "--news"));
  } else if (!cfg.fetch_url.empty()) {
    feed_text = news::fetch_feed(cfg.fetch_url);
  } else {
    throw ConfigError("score-news needs --news or --fetch-url");
  }
  const auto feed = news::parse_feed(feed_text);
  if (feed.skipped > 0) ctx.err << "skipped " << feed.skipped << " malformed articles\n";
  const auto scorer = pipeline::make_scorer(cfg);
  const auto registry = pipeline::make_registry(cfg);
  const auto scored = sentiment::score_articles(feed.articles, *scorer, registry);
  const auto intervals = sentiment::bucket_by_interval(scored, cfg.granularity);
  const OutputDir dir(cfg.out_dir);
  dir.write("scored.csv", sentiment::scored_csv(scored));
  const auto path = dir.write("sentiment.csv", sentiment::write_intervals(intervals));
  ctx.out << "articles," << scored.size() << "\nintervals," << intervals.size() << '\n';
  ctx.err << "wrote " << path.string() << '\n';
}

void cmd_fuse(const Context& ctx, const PipelineConfig& cfg) {
  const OhlcvSeries series = load_stock(cfg);
  const auto predictions = read_predictions(read_file(require_path(ctx.flags.predictions, "--predictions")));
  const auto intervals = sentiment::read_intervals(read_file(require_path(ctx.flags.sentiment, "--sentiment")));
  const auto records = fusion::time_map(predictions, intervals, series, cfg.alignment);
  const auto path = OutputDir(cfg.out_dir).write("records.csv", fusion::write_records(records));
  ctx.out << "records," << records.size() << '\n';
  ctx.err << "wrote " << path.string() << '\n';
}

std::vector<fusion::FusionRecord> load_records(const Flags& flags) {
  return fusion::read_records(read_file(require_path(flags.records, "--records")));
}

void cmd_emit_corpus(const Context& ctx, const PipelineConfig& cfg) {
  const auto records = load_records(ctx.flags);
  const auto path = OutputDir(cfg.out_dir).write("corpus.jsonl", fusion::emit_corpus(records));
  ctx.out << "lines," << records.size() << '\n';
  ctx.err << "wrote " << path.string() << '\n';
}

void cmd_fit_surrogate(const Context& ctx, const PipelineConfig& cfg) {
  const auto records = load_records(ctx.flags);
  const auto model = fusion::fit_surrogate(records);
  const auto path = OutputDir(cfg.out_dir).write("surrogate.txt", fusion::save_surrogate(model));
  ctx.out << "a," << csv::shortest(model.a) << "\nb," << csv::shortest(model.b) << "\nc," << csv::shortest(model.c)
          << "\nresidual_mse," << csv::shortest(model.residual_mse) << "\nn," << model.n << '\n';
  ctx.err << "wrote " << path.string() << '\n';
}

void cmd_evaluate(const Context& ctx, const PipelineConfig& cfg) {
  const Flags& f = ctx.flags;
  if (!f.records.empty()) {
    const auto records = load_records(f);
    if (f.surrogate.empty()) {
      const auto ev = pipeline::evaluate_records(records, cfg.test_fraction);
      ctx.out << metrics::compare_report(ev.baseline, ev.hybrid, ctx.format);
      return;
    }
    const auto model = fusion::load_surrogate(read_file(require_path(f.surrogate, "--surrogate")));
    std::vector<double> actual, baseline, hybrid;
    for (const auto& r : records) {
      if (!r.actual) continue;
      actual.push_back(*r.actual);
      baseline.push_back(r.lstm_prediction);
      hybrid.push_back(fusion::surrogate_predict(model, r.lstm_prediction, r.w_cs));
    }
    ctx.out << metrics::compare_report(metrics::compute_metrics(actual, baseline),
                                       metrics::compute_metrics(actual, hybrid), ctx.format);
    return;
  }
  if (f.actual.empty() || f.predicted.empty()) {
    throw ConfigError("evaluate needs --records, or both --actual and --predicted");
  }
  const auto actual = read_value_series(f.actual);
  const auto predicted = read_value_series(f.predicted);
  if (actual.size() != predicted.size()) {
    throw DataError("series lengths differ: " + std::to_string(actual.size()) + " actual vs " +
                    std::to_string(predicted.size()) + " predicted");
  }
  std::vector<double> a, p;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i].first != predicted[i].first) {
      throw DataError("date mismatch at row " + std::to_string(i + 1) + ": " + format_date(actual[i].first) +
                      " vs " + format_date(predicted[i].first));
    }
    a.push_back(actual[i].second);
    p.push_back(predicted[i].second);
  }
  ctx.out << metrics::metrics_report(metrics::compute_metrics(a, p), ctx.format);
}

void cmd_synth(const Context& ctx, const PipelineConfig& cfg) {
  const auto data = synth::generate(cfg.synth);
  const OutputDir dir(cfg.out_dir);
  dir.write("ohlcv.csv", write_ohlcv(data.series));
  dir.write("news.json", data.feed_json);
  dir.write("events.csv", synth::events_csv(data.events));
  ctx.out << "days," << data.series.size() << "\nevents," << data.events.size() << '\n';
  ctx.err << "wrote " << (fs::path(cfg.out_dir) / "ohlcv.csv").string() << ", news.json, events.csv\n";
}

void cmd_e2e(const Context& ctx, const PipelineConfig& cfg) {
  const auto result = pipeline::run_end_to_end(cfg, ctx.format, ctx.logger());
  const OutputDir dir(cfg.out_dir);
  dir.write("predictions.csv", write_predictions(result.predictions));
  dir.write("sentiment.csv", sentiment::write_intervals(result.sentiment));
  dir.write("records.csv", fusion::write_records(result.records));
  dir.write("corpus.jsonl", fusion::emit_corpus(result.records));
  dir.write("surrogate.txt", fusion::save_surrogate(result.evaluation.surrogate));
  dir.write("comparison.txt", result.table);
  ctx.out << result.table;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conv-LSTM price forecasting fused with news sentiment", "hybridcast"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "key = value configuration file");
  app.add_option("--out", f.out, "output directory (default: out)");
  app.add_option("--seed", f.seed, "seed for training and synthetic data");
  app.add_option("--format", f.format, "report format: text or csv");

  auto stock = [&](CLI::App* sub) { sub->add_option("--stock", f.stock, "OHLCV CSV"); };
  auto training = [&](CLI::App* sub) {
    sub->add_option("--epochs", f.epochs);
    sub->add_option("--learning-rate", f.learning_rate);
    sub->add_option("--window-length", f.window_length);
  };
  auto sentiment_opts = [&](CLI::App* sub) {
    sub->add_option("--weights", f.weights, "source weight registry (TSV)");
    sub->add_option("--lexicon", f.lexicon, "sentiment lexicon (TSV)");
    sub->add_option("--scorer-command", f.scorer_command, "external scorer, one line in, one label out");
    sub->add_option("--granularity", f.granularity, "day or hour");
  };
  auto synth_opts = [&](CLI::App* sub) {
    sub->add_option("--days", f.days);
    sub->add_option("--jump-probability", f.jump_probability);
  };

  auto* ingest = app.add_subcommand("ingest", "validate an OHLCV CSV and summarize its windows");
  stock(ingest);
  ingest->add_option("--window-length", f.window_length);
  auto* find = app.add_subcommand("find-seqlen", "search the window length");
  stock(find);
  training(find);
  auto* train = app.add_subcommand("train", "train the Conv-LSTM baseline");
  stock(train);
  training(train);
  auto* predict = app.add_subcommand("predict", "forecast every window of a series");
  stock(predict);
  predict->add_option("--model", f.model, "checkpoint from train")->required();
  auto* score = app.add_subcommand("score-news", "score a news feed and aggregate per interval");
  score->add_option("--news", f.news, "feed JSON file");
  score->add_option("--fetch-url", f.fetch_url, "live feed endpoint (http)");
  sentiment_opts(score);
  auto* fuse = app.add_subcommand("fuse", "join forecasts with sentiment by date");
  stock(fuse);
  fuse->add_option("--predictions", f.predictions)->required();
  fuse->add_option("--sentiment", f.sentiment)->required();
  fuse->add_option("--alignment", f.alignment, "target or origin");
  auto* corpus = app.add_subcommand("emit-corpus", "write the JSONL fine-tuning corpus");
  corpus->add_option("--records", f.records)->required();
  auto* fit = app.add_subcommand("fit-surrogate", "fit the linear fusion model");
  fit->add_option("--records", f.records)->required();
  auto* evaluate = app.add_subcommand("evaluate", "error metrics");
  evaluate->add_option("--actual", f.actual, "date,value CSV");
  evaluate->add_option("--predicted", f.predicted, "date,value CSV");
  evaluate->add_option("--records", f.records, "fused records CSV");
  evaluate->add_option("--surrogate", f.surrogate, "surrogate from fit-surrogate");
  auto* synth = app.add_subcommand("synth", "generate synthetic prices and news");
  synth_opts(synth);
  auto* e2e = app.add_subcommand("e2e", "synthetic end-to-end comparison");
  synth_opts(e2e);
  training(e2e);
  sentiment_opts(e2e);
  e2e->add_option("--alignment", f.alignment, "target or origin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const PipelineConfig cfg = resolve(f);
    Context ctx{f, out, err};
    if (f.format) ctx.format = metrics::parse_format(*f.format);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "ingest") cmd_ingest(ctx, cfg);
    else if (name == "find-seqlen") cmd_find_seqlen(ctx, cfg);
    else if (name == "train") cmd_train(ctx, cfg);
    else if (name == "predict") cmd_predict(ctx, cfg);
    else if (name == "score-news") cmd_score_news(ctx, cfg);
    else if (name == "fuse") cmd_fuse(ctx, cfg);
    else if (name == "emit-corpus") cmd_emit_corpus(ctx, cfg);
    else if (name == "fit-surrogate") cmd_fit_surrogate(ctx, cfg);
    else if (name == "evaluate") cmd_evaluate(ctx, cfg);
    else if (name == "synth") cmd_synth(ctx, cfg);
    else cmd_e2e(ctx, cfg);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace hybridcast
