#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "banditsum/config.hpp"
#include "banditsum/csv.hpp"
#include "banditsum/evaluation.hpp"
#include "banditsum/experiment.hpp"
#include "banditsum/model.hpp"
#include "banditsum/oracle.hpp"
#include "banditsum/rouge.hpp"
#include "banditsum/text.hpp"
#include "banditsum/trainer.hpp"

namespace fs = std::filesystem;
using namespace banditsum;

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Sentences of a plain text file, one per non-blank line.
std::vector<text::TokenList> read_sentences(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<text::TokenList> out;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = text::tokenize(line);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& spec) {
  std::vector<std::size_t> out;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const unsigned long value = std::stoul(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad index list: " + spec);
    out.push_back(value);
  }
  return out;
}

std::string join_indices(const policy::IndexSequence& indices) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(indices[i]);
  }
  return out;
}

const char* kScoreHeader = "id,r1_p,r1_r,r1_f,r2_p,r2_r,r2_f,rl_p,rl_r,rl_f,reward\n";

std::string score_row(const std::string& id, const rouge::RougeReward& s) {
  std::string row = csv::field(id);
  for (const auto* part : {&s.rouge1, &s.rouge2, &s.rougeL}) {
    row += ',' + csv::number(part->precision) + ',' + csv::number(part->recall) + ',' + csv::number(part->f1);
  }
  return row + ',' + csv::number(s.reward) + '\n';
}

std::string report_csv(const harness::EvalReport& report) {
  std::string out = "id,indices,r1_p,r1_r,r1_f,r2_p,r2_r,r2_f,rl_p,rl_r,rl_f,reward\n";
  for (const auto& d : report.documents) {
    std::string row = score_row(d.id, d.scores);
    out += row.insert(csv::field(d.id).size(), ',' + join_indices(d.indices));
  }
  return out;
}

std::string report_summary_csv(const harness::EvalReport& report) {
  return "documents,mean_rouge1_f1,mean_rouge2_f1,mean_rougeL_f1,mean_reward\n" +
         std::to_string(report.documents.size()) + ',' + csv::number(report.mean_rouge1_f1) + ',' +
         csv::number(report.mean_rouge2_f1) + ',' + csv::number(report.mean_rougeL_f1) + ',' +
         csv::number(report.mean_reward) + '\n';
}

std::string safe_filename(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void write_report(const harness::EvalReport& report, const text::Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir / "summaries");
  write_file(dir / "report.csv", report_csv(report));
  write_file(dir / "summary.csv", report_summary_csv(report));
  for (std::size_t i = 0; i < report.documents.size(); ++i) {
    const auto& doc = corpus[i].document;
    std::string body;
    for (std::size_t idx : report.documents[i].indices) body += doc.sentence(idx).original() + '\n';
    write_file(dir / "summaries" / (safe_filename(report.documents[i].id) + ".txt"), body);
  }
}

void print_report_summary(const harness::EvalReport& report) {
  std::cout << report_summary_csv(report);
}

// ---------------------------------------------------------------------------

int run_ingest(const std::string& path) {
  const auto corpus = text::load_corpus(path);
  std::size_t total = 0, min_s = SIZE_MAX, max_s = 0, tokens = 0;
  for (const auto& ex : corpus) {
    const std::size_t n = ex.document.size();
    total += n;
    min_s = std::min(min_s, n);
    max_s = std::max(max_s, n);
    for (const auto& s : ex.document.sentences()) tokens += s.tokens().size();
  }
  const double docs = static_cast<double>(corpus.size());
  std::cout << "documents,sentences,min_sentences,max_sentences,mean_sentences,mean_sentence_tokens\n"
            << corpus.size() << ',' << total << ',' << (corpus.empty() ? 0 : min_s) << ',' << max_s << ','
            << csv::number(corpus.empty() ? 0.0 : static_cast<double>(total) / docs) << ','
            << csv::number(total == 0 ? 0.0 : static_cast<double>(tokens) / static_cast<double>(total)) << '\n';
  return 0;
}

struct SynthArgs {
  std::size_t docs = 100, sents = 10, vocab = 200, sent_len = 8;
  std::string planted = "0,1,2";
  std::uint64_t seed = 0;
  std::string prefix = "doc";
  std::string out;
};

int run_synth(const SynthArgs& a) {
  text::SyntheticCorpusOptions opts;
  opts.n_docs = a.docs;
  opts.n_sentences = a.sents;
  opts.planted_positions = parse_index_list(a.planted);
  opts.vocab_size = a.vocab;
  opts.sentence_length = a.sent_len;
  opts.seed = a.seed;
  opts.id_prefix = a.prefix;
  text::write_corpus(text::generate_synthetic_corpus(opts), a.out);
  return 0;
}

struct ScoreArgs {
  std::string hyp, ref, corpus, indices, out;
  bool stem = false, union_lcs = false;
};

int run_score(const ScoreArgs& a) {
  const rouge::RougeOptions opts{a.stem, a.union_lcs};
  std::string out = kScoreHeader;
  if (!a.corpus.empty()) {
    // Index file: one line per document, "<id>,<i> <j> <k>".
    const auto corpus = text::load_corpus(a.corpus);
    std::istringstream in(read_file(a.indices));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw std::runtime_error("indices line " + std::to_string(line_no) + ": expected <id>,<indices>");
      }
      const std::string id = line.substr(0, comma);
      const auto it = std::find_if(corpus.begin(), corpus.end(), [&](const auto& ex) { return ex.id() == id; });
      if (it == corpus.end()) throw std::runtime_error("indices line " + std::to_string(line_no) + ": unknown id " + id);
      std::string list = line.substr(comma + 1);
      std::replace(list.begin(), list.end(), ' ', ',');
      out += score_row(id, rouge::reward(parse_index_list(list), it->document, it->reference, opts));
    }
  } else {
    if (a.hyp.empty() || a.ref.empty()) throw std::invalid_argument("score needs --hyp and --ref, or --corpus and --indices");
    out += score_row(fs::path(a.hyp).filename().string(),
                     rouge::score(read_sentences(a.hyp), read_sentences(a.ref), opts));
  }
  if (a.out.empty()) {
    std::cout << out;
  } else {
    write_file(a.out, out);
  }
  return 0;
}

int run_oracle(const std::string& corpus_path, std::size_t m, const std::string& out_path, bool stem) {
  const auto corpus = text::load_corpus(corpus_path);
  std::string out = "id,indices,oracle_reward,mean_index\n";
  for (const auto& ex : corpus) {
    const auto labels = harness::oracle_labels(ex, m, {stem, false});
    out += csv::field(ex.id()) + ',' + join_indices(labels.indices) + ',' + csv::number(labels.oracle_reward) + ',' +
           csv::number(labels.mean_index) + '\n';
  }
  if (out_path.empty()) {
    std::cout << out;
  } else {
    write_file(out_path, out);
  }
  return 0;
}

struct TrainArgs {
  std::string corpus, val, config, out;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int run_train(const TrainArgs& a) {
  config::RunConfig rc = a.config.empty() ? config::RunConfig{} : config::load_config(a.config);
  if (a.seed_given) rc.train.seed = a.seed;
  rc.train.validate();
  const auto corpus = text::load_corpus(a.corpus);
  const auto validation = text::load_corpus(a.val);
  auto network = rc.model.build(corpus, rc.train.seed);

  const fs::path dir = a.out;
  fs::create_directories(dir / "checkpoints");
  write_file(dir / "config.txt", config::render_config(rc));

  const std::string seed = std::to_string(rc.train.seed);
  std::string metrics = "seed,documents_seen,mean_sample_reward,greedy_reward,validation_mean_rouge_f1\n";
  std::string timing = "seed,documents_seen,wall_clock\n";
  auto on_validation = [&](const model::AffinityModel& m, const trainer::TrainingMetrics& row) {
    metrics += seed + ',' + std::to_string(row.documents_seen) + ',' + csv::number(row.mean_sample_reward) + ',' +
               csv::number(row.greedy_reward) + ',' + csv::number(row.validation_mean_rouge_f1) + '\n';
    timing += seed + ',' + std::to_string(row.documents_seen) + ',' + csv::number(row.wall_clock) + '\n';
    model::save_checkpoint(m, dir / "checkpoints" / ("step-" + std::to_string(row.documents_seen) + ".json"));
    model::save_checkpoint(m, dir / "checkpoint.json");
    // Rewritten each pass so an interrupted run still leaves its curve.
    write_file(dir / "metrics.csv", metrics);
    write_file(dir / "timing.csv", timing);
  };
  trainer::train(*network, corpus, validation, rc.train, on_validation);
  write_file(dir / "metrics.csv", metrics);
  write_file(dir / "timing.csv", timing);
  model::save_checkpoint(*network, dir / "checkpoint.json");
  return 0;
}

struct EvalArgs {
  std::string corpus, checkpoint, out;
  std::size_t m = 3, word_budget = 0;
  bool stem = false;
};

int run_eval(const EvalArgs& a) {
  const auto corpus = text::load_corpus(a.corpus);
  const auto network = model::load_checkpoint(a.checkpoint);
  harness::EvalOptions opts;
  opts.summary_length = a.m;
  opts.word_budget = a.word_budget;
  opts.rouge.stem = a.stem;
  const auto report = harness::evaluate(*network, corpus, opts);
  if (!a.out.empty()) write_report(report, corpus, a.out);
  print_report_summary(report);
  return 0;
}

int run_lead(const std::string& corpus_path, std::size_t k, const std::string& out, bool stem) {
  const auto corpus = text::load_corpus(corpus_path);
  const auto report = harness::evaluate_selector(
      [k](const text::Document& d) { return harness::lead_k(d, k); }, corpus, {stem, false});
  if (!out.empty()) write_report(report, corpus, out);
  print_report_summary(report);
  return 0;
}

struct EarlyLateArgs {
  std::string corpus, out, config;
  std::size_t sample = 1000, subset = 50, trials = 10, epochs = 100;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int run_early_late(const EarlyLateArgs& a) {
  config::RunConfig rc = a.config.empty() ? config::RunConfig{} : config::load_config(a.config);
  if (a.seed_given) rc.train.seed = a.seed;
  rc.train.validate();
  const auto corpus = text::load_corpus(a.corpus);

  harness::ExperimentConfig ec;
  ec.sample_size = a.sample;
  ec.subset_size = a.subset;
  ec.trials = a.trials;
  ec.epochs = a.epochs;
  ec.train = rc.train;
  // Both methods share one vocabulary built from the sampled documents.
  auto split = harness::split_early_late(corpus, a.sample, a.subset, rc.train.summary_length);
  text::Corpus both = split.early;
  both.insert(both.end(), split.late.begin(), split.late.end());
  const auto vocab = model::Vocabulary::build(both, rc.model.vocab_size);
  const auto spec = rc.model;
  const harness::ModelFactory factory = [&](std::uint64_t seed) { return spec.build(vocab, seed); };

  const auto report = harness::run_early_late_experiment(std::move(split), ec, factory);
  const fs::path dir = a.out;
  write_file(dir / "config.txt", config::render_config(rc));
  write_file(dir / "curves.csv", harness::curves_csv(report));
  write_file(dir / "summary.csv", harness::summary_csv(report));
  write_file(dir / "split.csv", harness::split_csv(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extractive summarization as a contextual bandit"};
  app.require_subcommand(1);

  std::string ingest_path;
  auto* ingest = app.add_subcommand("ingest", "Validate a JSONL corpus and print its statistics");
  ingest->add_option("corpus", ingest_path, "Corpus file")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Write a planted-sentence synthetic corpus");
  synth->add_option("--docs", synth_args.docs, "Number of documents");
  synth->add_option("--sents", synth_args.sents, "Sentences per document");
  synth->add_option("--planted", synth_args.planted, "Comma-separated 0-based planted positions");
  synth->add_option("--seed", synth_args.seed, "Random seed");
  synth->add_option("--vocab", synth_args.vocab, "Vocabulary size");
  synth->add_option("--sent-len", synth_args.sent_len, "Tokens per sentence");
  synth->add_option("--prefix", synth_args.prefix, "Document id prefix");
  synth->add_option("--out", synth_args.out, "Output JSONL")->required();

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "ROUGE of a hypothesis against a reference");
  score->add_option("--hyp", score_args.hyp, "Hypothesis text, one sentence per line");
  score->add_option("--ref", score_args.ref, "Reference text, one sentence per line");
  score->add_option("--corpus", score_args.corpus, "Corpus JSONL (with --indices)");
  score->add_option("--indices", score_args.indices, "Lines of <id>,<space-separated 0-based indices>");
  score->add_option("--out", score_args.out, "Output CSV (default stdout)");
  score->add_flag("--stem", score_args.stem, "Porter-stem tokens before matching");
  score->add_flag("--union-lcs", score_args.union_lcs, "Summary-level union LCS for ROUGE-L");

  std::string oracle_corpus, oracle_out;
  std::size_t oracle_m = 3;
  bool oracle_stem = false;
  auto* oracle = app.add_subcommand("oracle", "Greedy oracle labels for each document");
  oracle->add_option("--corpus", oracle_corpus, "Corpus JSONL")->required();
  oracle->add_option("--m", oracle_m, "Sentences per summary");
  oracle->add_option("--out", oracle_out, "Output CSV (default stdout)");
  oracle->add_flag("--stem", oracle_stem, "Porter-stem tokens before matching");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train the bandit policy");
  train->add_option("--corpus", train_args.corpus, "Training corpus JSONL")->required();
  train->add_option("--val", train_args.val, "Validation corpus JSONL")->required();
  train->add_option("--config", train_args.config, "key=value config file");
  train->add_option("--out", train_args.out, "Output directory")->required();
  auto* train_seed = train->add_option("--seed", train_args.seed, "Overrides the config seed");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Greedy-decode a checkpoint and score it");
  eval->add_option("--corpus", eval_args.corpus, "Corpus JSONL")->required();
  eval->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint JSON")->required();
  eval->add_option("--m", eval_args.m, "Sentences per summary");
  eval->add_option("--word-budget", eval_args.word_budget, "Optional token limit per summary");
  eval->add_option("--out", eval_args.out, "Directory for report.csv, summary.csv and summaries/");
  eval->add_flag("--stem", eval_args.stem, "Porter-stem tokens before matching");

  std::string lead_corpus, lead_out;
  std::size_t lead_k = 3;
  bool lead_stem = false;
  auto* lead = app.add_subcommand("lead", "Score the lead-k baseline");
  lead->add_option("--corpus", lead_corpus, "Corpus JSONL")->required();
  lead->add_option("--k", lead_k, "Leading sentences to take");
  lead->add_option("--out", lead_out, "Directory for report.csv, summary.csv and summaries/");
  lead->add_flag("--stem", lead_stem, "Porter-stem tokens before matching");

  EarlyLateArgs el_args;
  auto* early_late = app.add_subcommand("early-late", "Bandit vs sequential labeling on early and late documents");
  early_late->add_option("--corpus", el_args.corpus, "Corpus JSONL")->required();
  early_late->add_option("--sample", el_args.sample, "Documents to label");
  early_late->add_option("--subset", el_args.subset, "Documents per subset");
  early_late->add_option("--trials", el_args.trials, "Seeded trials per method and subset");
  early_late->add_option("--epochs", el_args.epochs, "Epochs per trial");
  early_late->add_option("--out", el_args.out, "Output directory")->required();
  early_late->add_option("--config", el_args.config, "key=value config file");
  auto* el_seed = early_late->add_option("--seed", el_args.seed, "Overrides the config seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(ingest_path);
    if (*synth) return run_synth(synth_args);
    if (*score) return run_score(score_args);
    if (*oracle) return run_oracle(oracle_corpus, oracle_m, oracle_out, oracle_stem);
    if (*train) {
      train_args.seed_given = train_seed->count() > 0;
      return run_train(train_args);
    }
    if (*eval) return run_eval(eval_args);
    if (*lead) return run_lead(lead_corpus, lead_k, lead_out, lead_stem);
    if (*early_late) {
      el_args.seed_given = el_seed->count() > 0;
      return run_early_late(el_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
