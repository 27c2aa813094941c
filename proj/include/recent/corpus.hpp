#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace recent {

// The designated negative label. Corpora may lack it entirely.
inline constexpr const char* kNoRelation = "no_relation";

// Half-open token index interval [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
  std::size_t size() const { return end - start; }
  bool contains(std::size_t i) const { return i >= start && i < end; }
  bool overlaps(const Span& o) const { return start < o.end && o.start < end; }
};

// One type-annotated sentence with subject/object spans and a gold relation.
struct Example {
  std::string id;
  std::vector<std::string> tokens;
  Span subj_span;
  Span obj_span;
  std::string subj_type;
  std::string obj_type;
  std::string relation;

  bool operator==(const Example&) const = default;
  bool is_semantic() const { return relation != kNoRelation; }
};

// Throws ValidationError (message names the example id) if any invariant
// fails: spans in range and non-empty, spans disjoint, non-empty strings.
void validate_example(const Example& ex);

// Immutable ordered collection of examples with derived label/type sets.
// Ids are unique; every example satisfies the Example invariants.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Example> examples);

  const std::vector<Example>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }

  const std::set<std::string>& label_set() const { return label_set_; }
  const std::set<std::string>& subj_type_set() const { return subj_type_set_; }
  const std::set<std::string>& obj_type_set() const { return obj_type_set_; }

  bool operator==(const Corpus& other) const {
    return examples_ == other.examples_;
  }

 private:
  std::vector<Example> examples_;
  std::set<std::string> label_set_;
  std::set<std::string> subj_type_set_;
  std::set<std::string> obj_type_set_;
};

// Reads JSONL in the TACRED field schema: id, token, subj_start, subj_end,
// obj_start, obj_end, subj_type, obj_type, relation. Serialized end indices
// are inclusive and converted to half-open here, exactly once. Unknown keys
// are ignored. Throws ParseError (naming the line number) on malformed JSON
// and ValidationError on invariant violations or duplicate ids.
Corpus read_jsonl(const std::string& path);

// Inverse of read_jsonl: one JSON object per line, inclusive end indices.
// read_jsonl(write_jsonl(c)) == c field-for-field.
void write_jsonl(const Corpus& corpus, const std::string& path);

struct SplitFractions {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct SplitResult {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Seeded disjoint partition. Dev/test sizes are round(N * fraction); the
// remainder goes to train. Requires >= 3 examples and positive fractions
// summing to 1 within 1e-9.
SplitResult split(const Corpus& corpus, const SplitFractions& fractions,
                  std::uint32_t seed);

}  // namespace recent
