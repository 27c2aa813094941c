// recent: train and evaluate entity-type-restricted relation classifiers.
//
// Subcommands: generate, train, predict, evaluate, audit, dump-schema.
// Machine-readable output (reports, audits, schema dumps) goes to stdout;
// progress notes and tables go to stderr. Exit code 0 on success.

#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "recent/analysis.hpp"
#include "recent/corpus.hpp"
#include "recent/errors.hpp"
#include "recent/evaluation.hpp"
#include "recent/generator.hpp"
#include "recent/model_io.hpp"
#include "recent/pipeline.hpp"
#include "recent/schema.hpp"

namespace {

using recent::Corpus;
using recent::ModelArtifact;
using recent::RestrictionMap;
using recent::TypePair;

struct PredictionRow {
  std::string id;
  std::string relation;
};

std::vector<PredictionRow> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw recent::IoError("cannot open '" + path + "' for reading");
  std::vector<PredictionRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
      rows.push_back({doc.at("id").get<std::string>(),
                      doc.at("predicted_relation").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw recent::ParseError(path + " line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return rows;
}

// Enforces one prediction row per gold example, in order, ids matching.
void check_alignment(const Corpus& gold,
                     const std::vector<PredictionRow>& pred) {
  if (gold.size() != pred.size())
    throw recent::ValidationError(
        "gold has " + std::to_string(gold.size()) + " examples but " +
        std::to_string(pred.size()) + " predictions were given");
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold.examples()[i].id != pred[i].id)
      throw recent::ValidationError(
          "id mismatch at line " + std::to_string(i + 1) + ": gold '" +
          gold.examples()[i].id + "' vs prediction '" + pred[i].id + "'");
  }
}

Corpus read_corpus_nonempty(const std::string& path) {
  Corpus corpus = recent::read_jsonl(path);
  if (corpus.empty())
    throw recent::ValidationError("corpus '" + path + "' is empty");
  return corpus;
}

// Shared by audit and dump-schema: a recent artifact's own map wins, then an
// explicit schema file, then the map induced from a training corpus. The
// returned note says which one was used.
RestrictionMap resolve_map(const std::string& model_path,
                           const std::string& schema_path,
                           const std::string& train_path, std::string* note) {
  if (!model_path.empty()) {
    ModelArtifact artifact = recent::load_model(model_path);
    if (const auto* p = std::get_if<recent::RecentPipeline>(&artifact)) {
      *note = "from model artifact " + model_path;
      return p->restriction_map();
    }
    if (schema_path.empty() && train_path.empty())
      throw recent::ValidationError(
          "model '" + model_path +
          "' is a flat artifact with no restriction map; pass --schema or "
          "--train");
  }
  if (!schema_path.empty()) {
    *note = "from schema file " + schema_path;
    return recent::load_schema_json(schema_path);
  }
  if (!train_path.empty()) {
    *note = "induced from training corpus " + train_path;
    return recent::build_restriction_map(recent::read_jsonl(train_path));
  }
  throw recent::ValidationError("no restriction map source given");
}

int run_generate(const recent::GenSpec& spec, const std::string& out,
                 const std::string& schema_out) {
  recent::Generated generated = recent::generate(spec);
  recent::write_jsonl(generated.corpus, out);
  if (!schema_out.empty()) recent::save_schema_json(generated.truth, schema_out);
  std::cerr << "wrote " << generated.corpus.size() << " examples to " << out
            << '\n';
  return 0;
}

int run_train(const std::string& mode, const std::string& train_path,
              const std::string& model_path, const recent::TrainConfig& train,
              double gate_threshold, int min_count) {
  Corpus corpus = read_corpus_nonempty(train_path);
  if (mode == "recent") {
    recent::PipelineConfig config;
    config.train_config = train;
    config.gate_threshold = gate_threshold;
    recent::RecentPipeline pipeline =
        recent::train_recent(corpus, config, min_count);
    const std::size_t all = pipeline.restriction_map().schemas().size();
    for (const auto& [pair, cands] : pipeline.restriction_map().entries())
      std::cout << "group (" << pair.subj_type << ", " << pair.obj_type
                << "): " << cands.size() << " of " << all
                << " candidate relations\n";
    std::cout << "gate + " << pipeline.group_models().size()
              << " group models trained on " << corpus.size() << " examples\n";
    recent::save_model(std::move(pipeline), model_path);
  } else {
    recent::save_model(recent::train_flat(corpus, train, min_count),
                       model_path);
  }
  std::cerr << "wrote model to " << model_path << '\n';
  return 0;
}

int run_predict(const std::string& model_path, const std::string& input_path,
                const std::string& out_path) {
  ModelArtifact artifact = recent::load_model(model_path);
  Corpus input = recent::read_jsonl(input_path);
  std::ofstream out(out_path);
  if (!out) throw recent::IoError("cannot open '" + out_path + "' for writing");
  for (const auto& ex : input.examples()) {
    nlohmann::ordered_json row;
    row["id"] = ex.id;
    if (const auto* p = std::get_if<recent::RecentPipeline>(&artifact)) {
      row["predicted_relation"] = recent::predict_recent(*p, ex);
      row["gate_proba"] = p->gate_proba(ex);
    } else {
      row["predicted_relation"] =
          recent::predict_flat(std::get<recent::LinearModel>(artifact), ex);
    }
    out << row.dump() << '\n';
  }
  if (!out) throw recent::IoError("error while writing '" + out_path + "'");
  std::cerr << "wrote " << input.size() << " predictions to " << out_path
            << '\n';
  return 0;
}

int run_evaluate(const std::string& gold_path, const std::string& pred_path) {
  Corpus gold = recent::read_jsonl(gold_path);
  std::vector<PredictionRow> pred = read_predictions(pred_path);
  check_alignment(gold, pred);
  std::vector<std::string> gold_labels, pred_labels;
  for (const auto& ex : gold.examples()) gold_labels.push_back(ex.relation);
  for (const auto& row : pred) pred_labels.push_back(row.relation);
  recent::EvalReport report = recent::micro_prf(gold_labels, pred_labels);
  std::cout << recent::to_json(report).dump(2) << '\n';
  std::cerr << recent::summary_line(report) << '\n';
  return 0;
}

int run_audit(const std::string& gold_path, const std::string& pred_path,
              const std::string& model_path, const std::string& train_path,
              const std::string& schema_path) {
  Corpus gold = recent::read_jsonl(gold_path);
  std::vector<PredictionRow> pred = read_predictions(pred_path);
  check_alignment(gold, pred);
  std::vector<std::string> gold_labels, pred_labels;
  std::vector<TypePair> pairs;
  for (const auto& ex : gold.examples()) {
    gold_labels.push_back(ex.relation);
    pairs.push_back({ex.subj_type, ex.obj_type});
  }
  for (const auto& row : pred) pred_labels.push_back(row.relation);
  std::string note;
  RestrictionMap map = resolve_map(model_path, schema_path, train_path, &note);
  std::map<std::string, std::size_t> counts =
      recent::train_counts(recent::read_jsonl(train_path));
  recent::ErrorAudit result =
      recent::audit(gold_labels, pred_labels, pairs, map, std::move(counts));
  std::cerr << "restriction map: " << note << '\n';
  std::cout << recent::to_json(result).dump(2) << '\n';
  std::cerr << recent::fp_table(result);
  return 0;
}

int run_dump_schema(const std::string& model_path,
                    const std::string& schema_path,
                    const std::string& train_path) {
  std::string note;
  RestrictionMap map = resolve_map(model_path, schema_path, train_path, &note);
  std::cerr << "restriction map: " << note << '\n';
  std::cout << map.entries_to_json().dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Relation classification with entity-type-restricted candidate sets"};
  app.require_subcommand(1);

  recent::GenSpec spec;
  std::string gen_out, gen_schema_out;
  auto* generate = app.add_subcommand(
      "generate",
      "Write a seeded synthetic corpus. Semantic examples carry a "
      "relation-specific trigger token with 90% fidelity, and entity mentions "
      "prefer a relation-specific surface variant with 85% fidelity whose "
      "meaning shifts per type pair (two relations share each variant).");
  generate->add_option("--n-subj-types", spec.n_subj_types)
      ->capture_default_str();
  generate->add_option("--n-obj-types", spec.n_obj_types)
      ->capture_default_str();
  generate->add_option("--n-relations", spec.n_relations)
      ->capture_default_str();
  generate->add_option("--domain-density", spec.domain_density,
                       "Probability each type joins S(r)/O(r), in (0,1]")
      ->capture_default_str();
  generate->add_option("--n-examples", spec.n_examples)->capture_default_str();
  generate->add_option("--no-relation-rate", spec.no_relation_rate)
      ->capture_default_str();
  generate
      ->add_option("--label-noise", spec.label_noise,
                   "Probability a semantic label is replaced by a random "
                   "other relation after the tokens are emitted")
      ->capture_default_str();
  generate->add_option("--trigger-vocab", spec.trigger_vocab_size)
      ->capture_default_str();
  generate->add_option("--seed", spec.seed)->capture_default_str();
  generate->add_option("--out", gen_out, "Corpus JSONL path")->required();
  generate->add_option("--schema-out", gen_schema_out,
                       "Ground-truth schema JSON path");

  std::string mode, train_path, model_path;
  recent::TrainConfig train_config;
  double gate_threshold = 0.5;
  int min_count = 2;
  auto* train = app.add_subcommand(
      "train", "Train a model: 'recent' gates no_relation then routes to "
               "per-type-pair classifiers; 'flat' is one classifier over all "
               "labels with types as features.");
  train->add_option("--mode", mode)
      ->required()
      ->check(CLI::IsMember({"recent", "flat"}));
  train->add_option("--train", train_path, "Training corpus JSONL")->required();
  train->add_option("--model", model_path, "Artifact output path")->required();
  train->add_option("--lr", train_config.learning_rate)->capture_default_str();
  train->add_option("--epochs", train_config.epochs)->capture_default_str();
  train->add_option("--l2", train_config.l2)->capture_default_str();
  train->add_option("--seed", train_config.seed)->capture_default_str();
  train->add_flag("--class-weighting", train_config.class_weighting,
                  "Weight classes by N/(K * count)");
  train->add_option("--gate-threshold", gate_threshold,
                    "P(semantic) needed to pass the gate (recent mode)")
      ->capture_default_str();
  train->add_option("--min-count", min_count,
                    "Feature admission threshold")
      ->capture_default_str();

  std::string pred_model, pred_input, pred_out;
  auto* predict = app.add_subcommand(
      "predict", "Write one JSONL line {id, predicted_relation[, gate_proba]} "
                 "per input example.");
  predict->add_option("--model", pred_model)->required();
  predict->add_option("--input", pred_input, "Corpus JSONL")->required();
  predict->add_option("--out", pred_out, "Predictions JSONL path")->required();

  std::string eval_gold, eval_pred;
  auto* evaluate = app.add_subcommand(
      "evaluate",
      "Micro-averaged P/R/F1 of predictions against a gold corpus.");
  evaluate->add_option("--gold", eval_gold, "Gold corpus JSONL")->required();
  evaluate->add_option("--pred", eval_pred, "Predictions JSONL")->required();

  std::string audit_gold, audit_pred, audit_model, audit_train, audit_schema;
  auto* audit = app.add_subcommand(
      "audit", "False-positive audit: totals, restriction-violating counts, "
               "per-relation breakdown, correlation with training counts.");
  audit->add_option("--gold", audit_gold, "Gold corpus JSONL")->required();
  audit->add_option("--pred", audit_pred, "Predictions JSONL")->required();
  audit->add_option("--train", audit_train,
                    "Training corpus JSONL (per-relation counts; also the "
                    "restriction-map fallback)")
      ->required();
  audit->add_option("--model", audit_model,
                    "Use this recent artifact's restriction map");
  audit->add_option("--schema", audit_schema, "Schema-override JSON");

  std::string dump_model, dump_schema_path, dump_train;
  auto* dump = app.add_subcommand(
      "dump-schema", "Print the restriction-map entries as JSON.");
  dump->add_option("--model", dump_model, "Recent artifact");
  dump->add_option("--schema", dump_schema_path, "Schema-override JSON");
  dump->add_option("--train", dump_train, "Corpus JSONL to induce the map from");

  try {
    app.parse(argc, argv);
    if (generate->parsed()) return run_generate(spec, gen_out, gen_schema_out);
    if (train->parsed())
      return run_train(mode, train_path, model_path, train_config,
                       gate_threshold, min_count);
    if (predict->parsed()) return run_predict(pred_model, pred_input, pred_out);
    if (evaluate->parsed()) return run_evaluate(eval_gold, eval_pred);
    if (audit->parsed())
      return run_audit(audit_gold, audit_pred, audit_model, audit_train,
                       audit_schema);
    if (dump->parsed())
      return run_dump_schema(dump_model, dump_schema_path, dump_train);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
