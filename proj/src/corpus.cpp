#include "recent/corpus.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "recent/errors.hpp"
#include "recent/rng.hpp"

namespace recent {

void validate_example(const Example& ex) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("example '" + ex.id + "': " + what);
  };
  if (ex.id.empty()) throw ValidationError("example with empty id");
  auto check_span = [&](const Span& s, const char* name) {
    if (s.start >= s.end) fail(std::string(name) + " span is empty or inverted");
    if (s.end > ex.tokens.size())
      fail(std::string(name) + " span exceeds token count");
  };
  check_span(ex.subj_span, "subj");
  check_span(ex.obj_span, "obj");
  if (ex.subj_span.overlaps(ex.obj_span)) fail("subj and obj spans overlap");
  if (ex.subj_type.empty()) fail("empty subj_type");
  if (ex.obj_type.empty()) fail("empty obj_type");
  if (ex.relation.empty()) fail("empty relation");
}

Corpus::Corpus(std::vector<Example> examples) : examples_(std::move(examples)) {
  std::set<std::string> seen_ids;
  for (const Example& ex : examples_) {
    validate_example(ex);
    if (!seen_ids.insert(ex.id).second)
      throw ValidationError("duplicate example id '" + ex.id + "'");
    label_set_.insert(ex.relation);
    subj_type_set_.insert(ex.subj_type);
    obj_type_set_.insert(ex.obj_type);
  }
}

namespace {

std::size_t get_index(const nlohmann::json& obj, const char* key,
                      std::size_t line_no) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ParseError("line " + std::to_string(line_no) + ": field '" + key +
                     "' must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

Corpus read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::vector<Example> examples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    Example ex;
    try {
      if (!obj.is_object())
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected a JSON object");
      ex.id = obj.at("id").get<std::string>();
      ex.tokens = obj.at("token").get<std::vector<std::string>>();
      // TACRED serializes inclusive end indices; convert to half-open here.
      ex.subj_span = {get_index(obj, "subj_start", line_no),
                      get_index(obj, "subj_end", line_no) + 1};
      ex.obj_span = {get_index(obj, "obj_start", line_no),
                     get_index(obj, "obj_end", line_no) + 1};
      ex.subj_type = obj.at("subj_type").get<std::string>();
      ex.obj_type = obj.at("obj_type").get<std::string>();
      ex.relation = obj.at("relation").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    examples.push_back(std::move(ex));
  }
  return Corpus(std::move(examples));
}

void write_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const Example& ex : corpus.examples()) {
    nlohmann::ordered_json obj;
    obj["id"] = ex.id;
    obj["token"] = ex.tokens;
    obj["subj_start"] = ex.subj_span.start;
    obj["subj_end"] = ex.subj_span.end - 1;
    obj["obj_start"] = ex.obj_span.start;
    obj["obj_end"] = ex.obj_span.end - 1;
    obj["subj_type"] = ex.subj_type;
    obj["obj_type"] = ex.obj_type;
    obj["relation"] = ex.relation;
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("error while writing '" + path + "'");
}

SplitResult split(const Corpus& corpus, const SplitFractions& fractions,
                  std::uint32_t seed) {
  const double sum = fractions.train + fractions.dev + fractions.test;
  if (fractions.train <= 0 || fractions.dev <= 0 || fractions.test <= 0)
    throw ValidationError("split fractions must be positive");
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("split fractions must sum to 1");
  const std::size_t n = corpus.size();
  if (n < 3) throw ValidationError("need at least 3 examples to split");

  const auto n_dev = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * fractions.dev));
  const auto n_test = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * fractions.test));
  if (n_dev + n_test >= n)
    throw ValidationError("split leaves no examples for train");
  const std::size_t n_train = n - n_dev - n_test;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937 rng(seed);
  shuffle(order, rng);

  auto take = [&](std::size_t begin, std::size_t count) {
    std::vector<Example> part;
    part.reserve(count);
    for (std::size_t i = begin; i < begin + count; ++i)
      part.push_back(corpus.examples()[order[i]]);
    return Corpus(std::move(part));
  };
  return SplitResult{take(0, n_train), take(n_train, n_dev),
                     take(n_train + n_dev, n_test)};
}

}  // namespace recent
