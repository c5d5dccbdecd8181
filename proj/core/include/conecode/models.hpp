#pragma once

// Concrete computable semimeasure generators: the inputs to the pipeline and
// the compression models.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "conecode/dyadic.hpp"
#include "conecode/schedule.hpp"
#include "conecode/semimeasure.hpp"

namespace conecode {

struct ModelSpec;

struct UniformModel {};

// P(next bit = 1) = p.
struct BernoulliModel {
  Dyadic p_one;
};

// Q(x) = ratio^|x| with ratio <= 1/2; ratio = 1/4 is the classic fixed pad
// with gap 2^-(2n+1) at length n.
struct GeometricModel {
  Dyadic ratio;
};

// Conditional table over contexts of exactly `order` bits; history is
// zero-padded on the left, p_zero[ctx] = P(next bit = 0 | ctx).
struct MarkovModel {
  int order = 0;
  std::vector<Dyadic> p_zero;
};

struct MixtureModel {
  std::vector<ModelSpec> parts;
  std::vector<Dyadic> weights;
};

struct ModelSpec {
  enum class Kind { uniform, bernoulli, geometric, markov, mixture };
  Kind kind = Kind::uniform;
  Dyadic param;                       // bernoulli p / geometric ratio
  int order = 0;                      // markov
  std::vector<Dyadic> p_zero;         // markov
  std::vector<ModelSpec> parts;       // mixture
  std::vector<Dyadic> weights;        // mixture

  static ModelSpec uniform();
  static ModelSpec bernoulli(const Dyadic& p_one);
  static ModelSpec geometric(const Dyadic& ratio);
  static ModelSpec markov(int order, std::vector<Dyadic> p_zero);
  static ModelSpec mixture(std::vector<ModelSpec> parts, std::vector<Dyadic> weights);
};

// Checks parameter ranges (probabilities in [0,1], geometric ratio <= 1/2,
// mixture weights summing to <= 1); throws InvalidInput on violation.
void check_model(const ModelSpec& spec);

// True for models that realize to measures (zero finite-string mass).
bool is_measure_kind(const ModelSpec& spec);

// Q(x) = product of conditional probabilities along x (mixtures delegate
// to mix).
SemimeasureTable realize(const ModelSpec& spec, int depth);

// t(x) = ceil(-log2 Q(x)) + slack, monotonized so children never fall below
// their parent. Requires Q > 0 everywhere up to the depth.
BudgetSchedule budget_schedule_of(const ModelSpec& spec, int depth, int slack);

struct ModelFile {
  ModelSpec spec;
  int depth = 0;
};

// Line-oriented config: `depth <D>` then a model block (`kind ...`).
ModelFile parse_model_file(std::istream& in);
// Shorthand for simple models: "uniform", "bernoulli=3/2^2", "geometric=1/2^2".
ModelSpec parse_model_inline(const std::string& text);
// Canonical one-line description used in reports.
std::string describe_model(const ModelSpec& spec);
// Full config serialization (inverse of parse_model_file).
void write_model_file(std::ostream& out, const ModelSpec& spec, int depth);

}  // namespace conecode
