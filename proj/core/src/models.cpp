#include "conecode/models.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace conecode {

ModelSpec ModelSpec::uniform() { return ModelSpec{}; }

ModelSpec ModelSpec::bernoulli(const Dyadic& p_one) {
  ModelSpec s;
  s.kind = Kind::bernoulli;
  s.param = p_one;
  return s;
}

ModelSpec ModelSpec::geometric(const Dyadic& ratio) {
  ModelSpec s;
  s.kind = Kind::geometric;
  s.param = ratio;
  return s;
}

ModelSpec ModelSpec::markov(int order, std::vector<Dyadic> p_zero) {
  ModelSpec s;
  s.kind = Kind::markov;
  s.order = order;
  s.p_zero = std::move(p_zero);
  return s;
}

ModelSpec ModelSpec::mixture(std::vector<ModelSpec> parts,
                             std::vector<Dyadic> weights) {
  ModelSpec s;
  s.kind = Kind::mixture;
  s.parts = std::move(parts);
  s.weights = std::move(weights);
  return s;
}

void check_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::uniform:
      return;
    case ModelSpec::Kind::bernoulli:
      if (spec.param > Dyadic::one())
        fail(Errc::invalid_input, "bernoulli probability exceeds 1");
      return;
    case ModelSpec::Kind::geometric:
      if (spec.param > Dyadic::two_to_minus(1))
        fail(Errc::invalid_input, "geometric ratio must be <= 1/2");
      return;
    case ModelSpec::Kind::markov: {
      if (spec.order < 0 || spec.order > 16)
        fail(Errc::invalid_input, "markov order outside 0..16");
      if (spec.p_zero.size() != (size_t(1) << spec.order))
        fail(Errc::invalid_input, "markov table must cover every context");
      for (const auto& p : spec.p_zero)
        if (p > Dyadic::one())
          fail(Errc::invalid_input, "markov conditional exceeds 1");
      return;
    }
    case ModelSpec::Kind::mixture: {
      if (spec.parts.empty() || spec.parts.size() != spec.weights.size())
        fail(Errc::invalid_input, "mixture needs matching parts and weights");
      Dyadic total;
      for (const auto& w : spec.weights) total += w;
      if (total > Dyadic::one())
        fail(Errc::weight_overflow,
             "mixture weights sum to " + total.str() + " > 1");
      for (const auto& p : spec.parts) check_model(p);
      return;
    }
  }
}

bool is_measure_kind(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::uniform:
    case ModelSpec::Kind::bernoulli:
    case ModelSpec::Kind::markov:
      return true;
    case ModelSpec::Kind::geometric:
      return spec.param == Dyadic::two_to_minus(1);
    case ModelSpec::Kind::mixture: {
      Dyadic total;
      for (const auto& w : spec.weights) total += w;
      if (!(total == Dyadic::one())) return false;
      for (const auto& p : spec.parts)
        if (!is_measure_kind(p)) return false;
      return true;
    }
  }
  return false;
}

SemimeasureTable realize(const ModelSpec& spec, int depth) {
  check_model(spec);
  SemimeasureTable out(depth);
  switch (spec.kind) {
    case ModelSpec::Kind::uniform: {
      for (int n = 0; n <= depth; ++n)
        for (uint64_t v = 0; v < (uint64_t(1) << n); ++v)
          out.set_index((size_t(1) << n) - 1 + v, Dyadic::two_to_minus(n));
      return out;
    }
    case ModelSpec::Kind::geometric: {
      Dyadic value = Dyadic::one();
      for (int n = 0; n <= depth; ++n) {
        for (uint64_t v = 0; v < (uint64_t(1) << n); ++v)
          out.set_index((size_t(1) << n) - 1 + v, value);
        value = value * spec.param;
      }
      return out;
    }
    case ModelSpec::Kind::bernoulli:
    case ModelSpec::Kind::markov: {
      const bool markov = spec.kind == ModelSpec::Kind::markov;
      const int order = markov ? spec.order : 0;
      const uint64_t ctx_mask = order == 0 ? 0 : (uint64_t(1) << order) - 1;
      const Dyadic one = Dyadic::one();
      out.set_index(0, one);
      for (int n = 0; n < depth; ++n) {
        for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
          size_t parent = (size_t(1) << n) - 1 + v;
          // Histories shorter than the order behave as if zero-padded.
          uint64_t ctx = v & ctx_mask;
          Dyadic p0 = markov ? spec.p_zero[ctx] : one - spec.param;
          Dyadic p1 = one - p0;
          size_t child0 = (size_t(1) << (n + 1)) - 1 + 2 * v;
          out.set_index(child0, out.at_index(parent) * p0);
          out.set_index(child0 + 1, out.at_index(parent) * p1);
        }
      }
      return out;
    }
    case ModelSpec::Kind::mixture: {
      std::vector<SemimeasureTable> parts;
      parts.reserve(spec.parts.size());
      for (const auto& p : spec.parts) parts.push_back(realize(p, depth));
      return mix(parts, spec.weights);
    }
  }
  fail(Errc::invalid_input, "unknown model kind");
}

BudgetSchedule budget_schedule_of(const ModelSpec& spec, int depth, int slack) {
  if (slack < 0) fail(Errc::invalid_input, "negative slack");
  SemimeasureTable q = realize(spec, depth);
  BudgetSchedule out;
  out.depth = depth;
  out.t.resize(q.node_count());
  for (int n = 0; n <= depth; ++n) {
    for (uint64_t v = 0; v < (uint64_t(1) << n); ++v) {
      size_t i = (size_t(1) << n) - 1 + v;
      const Dyadic& qx = q.at_index(i);
      if (qx.is_zero())
        fail(Errc::zero_mass, "model assigns zero mass to " +
                                  SemimeasureTable::node_string(n, v).str());
      int t = qx.neg_log2_ceil() + slack;
      if (n > 0) {
        size_t parent = ((i + 1) >> 1) - 1;
        t = std::max(t, out.t[parent]);
      }
      out.t[i] = t;
    }
  }
  return out;
}

namespace {

std::vector<std::vector<std::string>> tokenize_lines(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

ModelSpec parse_block(const std::vector<std::vector<std::string>>& lines,
                      size_t& pos) {
  if (pos >= lines.size() || lines[pos][0] != "kind")
    fail(Errc::parse_error, "expected `kind ...` line in model config");
  const auto& kl = lines[pos];
  ++pos;
  if (kl.size() < 2) fail(Errc::parse_error, "kind line missing arguments");
  const std::string& kind = kl[1];
  if (kind == "uniform") return ModelSpec::uniform();
  if (kind == "bernoulli" || kind == "geometric") {
    if (kl.size() != 3) fail(Errc::parse_error, kind + " needs one parameter");
    Dyadic p = Dyadic::parse(kl[2]);
    return kind == "bernoulli" ? ModelSpec::bernoulli(p) : ModelSpec::geometric(p);
  }
  if (kind == "markov") {
    if (kl.size() != 3) fail(Errc::parse_error, "markov needs an order");
    int order = std::stoi(kl[2]);
    if (order < 0 || order > 16) fail(Errc::parse_error, "markov order outside 0..16");
    std::vector<Dyadic> p_zero(size_t(1) << order);
    std::vector<bool> seen(p_zero.size(), false);
    for (size_t k = 0; k < p_zero.size(); ++k) {
      if (pos >= lines.size() || lines[pos][0] != "p0" || lines[pos].size() != 3)
        fail(Errc::parse_error, "markov block needs `p0 <ctx> <m>/2^<e>` lines");
      BitString ctx = BitString::parse(lines[pos][1]);
      if (ctx.length() != order)
        fail(Errc::parse_error, "markov context length must equal the order");
      if (seen[ctx.value()]) fail(Errc::parse_error, "duplicate markov context");
      seen[ctx.value()] = true;
      p_zero[ctx.value()] = Dyadic::parse(lines[pos][2]);
      ++pos;
    }
    return ModelSpec::markov(order, std::move(p_zero));
  }
  if (kind == "mixture") {
    if (kl.size() != 3) fail(Errc::parse_error, "mixture needs a component count");
    int count = std::stoi(kl[2]);
    if (count <= 0 || count > 64) fail(Errc::parse_error, "bad mixture count");
    std::vector<ModelSpec> parts;
    std::vector<Dyadic> weights;
    for (int k = 0; k < count; ++k) {
      if (pos >= lines.size() || lines[pos][0] != "weight" || lines[pos].size() != 2)
        fail(Errc::parse_error, "mixture component needs a `weight` line");
      weights.push_back(Dyadic::parse(lines[pos][1]));
      ++pos;
      parts.push_back(parse_block(lines, pos));
    }
    return ModelSpec::mixture(std::move(parts), std::move(weights));
  }
  fail(Errc::parse_error, "unknown model kind: " + kind);
}

void write_block(std::ostream& out, const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::uniform:
      out << "kind uniform\n";
      return;
    case ModelSpec::Kind::bernoulli:
      out << "kind bernoulli " << spec.param.str() << "\n";
      return;
    case ModelSpec::Kind::geometric:
      out << "kind geometric " << spec.param.str() << "\n";
      return;
    case ModelSpec::Kind::markov:
      out << "kind markov " << spec.order << "\n";
      for (uint64_t c = 0; c < (uint64_t(1) << spec.order); ++c)
        out << "p0 " << (spec.order == 0 ? "-" : BitString(c, spec.order).str())
            << " " << spec.p_zero[c].str() << "\n";
      return;
    case ModelSpec::Kind::mixture:
      out << "kind mixture " << spec.parts.size() << "\n";
      for (size_t k = 0; k < spec.parts.size(); ++k) {
        out << "weight " << spec.weights[k].str() << "\n";
        write_block(out, spec.parts[k]);
      }
      return;
  }
}

}  // namespace

ModelFile parse_model_file(std::istream& in) {
  auto lines = tokenize_lines(in);
  ModelFile out;
  bool have_depth = false;
  size_t pos = 0;
  if (pos < lines.size() && lines[pos][0] == "depth") {
    if (lines[pos].size() != 2) fail(Errc::parse_error, "bad depth line");
    out.depth = std::stoi(lines[pos][1]);
    have_depth = true;
    ++pos;
  }
  out.spec = parse_block(lines, pos);
  if (pos < lines.size() && lines[pos][0] == "depth") {
    if (have_depth) fail(Errc::parse_error, "duplicate depth line");
    out.depth = std::stoi(lines[pos][1]);
    have_depth = true;
    ++pos;
  }
  if (!have_depth) fail(Errc::parse_error, "model config missing `depth` line");
  if (pos != lines.size()) fail(Errc::parse_error, "trailing content in model config");
  check_model(out.spec);
  return out;
}

ModelSpec parse_model_inline(const std::string& text) {
  if (text == "uniform") return ModelSpec::uniform();
  auto eq = text.find('=');
  if (eq != std::string::npos) {
    std::string kind = text.substr(0, eq);
    Dyadic p = Dyadic::parse(text.substr(eq + 1));
    if (kind == "bernoulli") {
      auto s = ModelSpec::bernoulli(p);
      check_model(s);
      return s;
    }
    if (kind == "geometric") {
      auto s = ModelSpec::geometric(p);
      check_model(s);
      return s;
    }
  }
  fail(Errc::parse_error,
       "cannot parse inline model `" + text +
           "` (expected uniform, bernoulli=<m>/2^<e>, geometric=<m>/2^<e>, "
           "or a config file path)");
}

std::string describe_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::uniform:
      return "uniform";
    case ModelSpec::Kind::bernoulli:
      return "bernoulli(" + spec.param.str() + ")";
    case ModelSpec::Kind::geometric:
      return "geometric(" + spec.param.str() + ")";
    case ModelSpec::Kind::markov:
      return "markov(order=" + std::to_string(spec.order) + ")";
    case ModelSpec::Kind::mixture: {
      std::string out = "mixture[";
      for (size_t k = 0; k < spec.parts.size(); ++k) {
        if (k) out += ",";
        out += spec.weights[k].str() + "*" + describe_model(spec.parts[k]);
      }
      return out + "]";
    }
  }
  return "?";
}

void write_model_file(std::ostream& out, const ModelSpec& spec, int depth) {
  out << "depth " << depth << "\n";
  write_block(out, spec);
}

}  // namespace conecode
