#include "rauzy/weights.hpp"

#include <sstream>

namespace rauzy {

void require_same_alphabet(const Alphabet& expected, const Alphabet& actual) {
  if (&expected != &actual && !(expected == actual)) {
    throw AlphabetMismatchError("weight vector is defined over a different alphabet");
  }
}

WeightVector normalized(const WeightVector& w) {
  Rational s = w.total();
  if (s == 0) throw DomainError("cannot normalize the zero weight vector");
  std::vector<Rational> v(w.values().begin(), w.values().end());
  for (auto& x : v) x /= s;
  return {w.alphabet_ptr(), std::move(v)};
}

WeightVector normalized(const ScaledWeights& w) { return normalized(to_exact(w)); }

FastWeights normalized(const FastWeights& w) {
  double s = w.total();
  if (!(s > 0)) throw DomainError("cannot normalize the zero weight vector");
  std::vector<double> v(w.values().begin(), w.values().end());
  for (auto& x : v) x /= s;
  return {w.alphabet_ptr(), std::move(v)};
}

FastWeights to_fast(const WeightVector& w) {
  std::vector<double> v;
  v.reserve(w.size());
  for (const auto& x : w.values()) v.push_back(to_double(x));
  return {w.alphabet_ptr(), std::move(v)};
}

FastWeights to_fast(const ScaledWeights& w) {
  // Divide by the total in exact arithmetic first; entries may exceed the
  // double range.
  BigInt total = w.total();
  if (total == 0) throw DomainError("cannot normalize the zero weight vector");
  std::vector<double> v;
  v.reserve(w.size());
  for (const auto& x : w.values()) v.push_back(to_double(Rational(x, total)));
  return {w.alphabet_ptr(), std::move(v)};
}

WeightVector to_exact(const FastWeights& w) {
  std::vector<Rational> v;
  v.reserve(w.size());
  for (double x : w.values()) v.push_back(exact_rational(x));
  return {w.alphabet_ptr(), std::move(v)};
}

WeightVector to_exact(const ScaledWeights& w) {
  std::vector<Rational> v(w.values().begin(), w.values().end());
  return {w.alphabet_ptr(), std::move(v)};
}

ScaledWeights to_scaled(const WeightVector& w) {
  BigInt den = 1;
  for (const auto& x : w.values()) den = lcm(den, BigInt(denominator(x)));
  std::vector<BigInt> v;
  v.reserve(w.size());
  for (const auto& x : w.values()) v.push_back(BigInt(numerator(x)) * (den / denominator(x)));
  return {w.alphabet_ptr(), std::move(v)};
}

WeightVector parse_weights(const AlphabetPtr& alphabet_ptr, std::string_view text) {
  const Alphabet& alphabet = *alphabet_ptr;
  std::vector<Rational> values(alphabet.size());
  std::vector<bool> seen(alphabet.size(), false);
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("weight entry '" + item + "' is not label=value");
    std::string label = item.substr(0, eq);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
    };
    trim(label);
    if (!alphabet.contains(label)) throw ParseError("weight for unknown label '" + label + "'");
    auto id = index(alphabet.id(label));
    if (seen[id]) throw ParseError("label '" + label + "' given twice");
    seen[id] = true;
    values[id] = parse_rational(item.substr(eq + 1));
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ParseError("missing weight for label '" + alphabet.name(label_at(i)) + "'");
  }
  for (const auto& v : values) {
    if (v < 0) throw ParseError("weights must be nonnegative");
  }
  return {alphabet_ptr, std::move(values)};
}

nlohmann::json to_json(const WeightVector& w) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < w.size(); ++i) j[w.alphabet().name(label_at(i))] = format_rational(w.values()[i]);
  return j;
}

nlohmann::json to_json(const FastWeights& w) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < w.size(); ++i) j[w.alphabet().name(label_at(i))] = format_double(w.values()[i]);
  return j;
}

namespace {

template <class Scalar, class Parse>
BasicWeights<Scalar> from_json_impl(const AlphabetPtr& alphabet, const nlohmann::json& j, Parse parse) {
  if (!j.is_object()) throw ParseError("weights must be a JSON object");
  if (j.size() != alphabet->size()) throw AlphabetMismatchError("weights JSON does not match the alphabet");
  std::vector<Scalar> v(alphabet->size());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) throw ParseError("weight values must be strings");
    v[index(alphabet->id(it.key()))] = parse(it.value().template get<std::string>());
  }
  return {alphabet, std::move(v)};
}

}  // namespace

WeightVector weights_from_json(const AlphabetPtr& alphabet, const nlohmann::json& j) {
  return from_json_impl<Rational>(alphabet, j, [](const std::string& s) { return parse_rational(s); });
}

FastWeights fast_weights_from_json(const AlphabetPtr& alphabet, const nlohmann::json& j) {
  return from_json_impl<double>(alphabet, j, [](const std::string& s) {
    try {
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos != s.size()) throw ParseError("malformed decimal '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw ParseError("malformed decimal '" + s + "'");
    }
  });
}

}  // namespace rauzy
