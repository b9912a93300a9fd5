#include "ensys/system.hpp"

#include "ensys/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>
#include <stdexcept>

namespace ensys {

namespace {

const char* kind_name(EnConstraint::Kind k) {
  switch (k) {
    case EnConstraint::Kind::Unit: return "unit";
    case EnConstraint::Kind::Add: return "add";
    case EnConstraint::Kind::Mul: return "mul";
  }
  return "?";
}

}  // namespace

EnConstraint EnConstraint::add(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
  return {Kind::Add, std::min(i, j), std::max(i, j), k};
}

EnConstraint EnConstraint::mul(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
  return {Kind::Mul, std::min(i, j), std::max(i, j), k};
}

std::uint32_t EnConstraint::max_index() const { return std::max({i, j, k}); }

EnConstraint EnConstraint::renamed(std::span<const std::uint32_t> mapping) const {
  switch (kind) {
    case Kind::Unit: return unit(mapping[i - 1]);
    case Kind::Add: return add(mapping[i - 1], mapping[j - 1], mapping[k - 1]);
    case Kind::Mul: return mul(mapping[i - 1], mapping[j - 1], mapping[k - 1]);
  }
  return *this;
}

bool EnConstraint::holds(std::span<const Integer> x) const {
  switch (kind) {
    case Kind::Unit: return x[i - 1] == 1;
    case Kind::Add: return x[i - 1] + x[j - 1] == x[k - 1];
    case Kind::Mul: return x[i - 1] * x[j - 1] == x[k - 1];
  }
  return false;
}

Polynomial EnConstraint::to_polynomial(std::size_t n) const {
  const auto var = [n](std::uint32_t v) { return Polynomial::variable(n, v); };
  switch (kind) {
    case Kind::Unit: return var(i) - Polynomial::constant(n, 1);
    case Kind::Add: return var(i) + var(j) - var(k);
    case Kind::Mul: return var(i) * var(j) - var(k);
  }
  return Polynomial(n);
}

std::string EnConstraint::to_string() const {
  const auto x = [](std::uint32_t v) { return "x" + std::to_string(v); };
  switch (kind) {
    case Kind::Unit: return x(i) + "=1";
    case Kind::Add: return x(i) + "+" + x(j) + "=" + x(k);
    case Kind::Mul: return x(i) + "*" + x(j) + "=" + x(k);
  }
  return "?";
}

EnSystem::EnSystem(std::size_t n, std::vector<EnConstraint> constraints) : n_(n) {
  for (auto& c : constraints) {
    if (c.kind != EnConstraint::Kind::Unit && c.i > c.j) std::swap(c.i, c.j);
    const bool bad_zero = c.i == 0 || (c.kind != EnConstraint::Kind::Unit && (c.j == 0 || c.k == 0));
    if (bad_zero) throw std::invalid_argument("constraint " + c.to_string() + " uses index 0");
    if (c.max_index() > n)
      throw std::invalid_argument("constraint " + c.to_string() + " exceeds n=" + std::to_string(n));
  }
  std::sort(constraints.begin(), constraints.end());
  constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());
  constraints_ = std::move(constraints);
}

EnSystem EnSystem::unchecked(std::size_t n, std::vector<EnConstraint> constraints) {
  EnSystem s;
  s.n_ = n;
  s.constraints_ = std::move(constraints);
  return s;
}

bool EnSystem::holds(std::span<const Integer> x) const {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const EnConstraint& c) { return c.holds(x); });
}

std::vector<std::uint32_t> EnSystem::unconstrained_variables() const {
  std::vector<bool> used(n_ + 1, false);
  for (const auto& c : constraints_) {
    used[c.i] = true;
    if (c.kind != EnConstraint::Kind::Unit) used[c.j] = used[c.k] = true;
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 1; v <= n_; ++v)
    if (!used[v]) out.push_back(v);
  return out;
}

EnSystem EnSystem::with(const EnConstraint& c, std::size_t n) const {
  auto cs = constraints_;
  cs.push_back(c);
  return EnSystem(std::max(n, n_), std::move(cs));
}

std::vector<std::string> validate(const EnSystem& sys) {
  std::vector<std::string> out;
  const auto& cs = sys.constraints();
  for (std::size_t idx = 0; idx < cs.size(); ++idx) {
    const auto& c = cs[idx];
    const std::string name = c.to_string();
    const bool binary = c.kind != EnConstraint::Kind::Unit;
    if (c.i == 0 || (binary && (c.j == 0 || c.k == 0))) out.push_back(name + ": index 0");
    if (c.max_index() > sys.n())
      out.push_back(name + ": index " + std::to_string(c.max_index()) + " > n=" + std::to_string(sys.n()));
    if (binary && c.i > c.j)
      out.push_back(name + ": unnormalized pair (" + std::to_string(c.i) + "," + std::to_string(c.j) + ")");
    if (!binary && (c.j != 0 || c.k != 0)) out.push_back(name + ": unit constraint with extra indices");
    if (idx > 0) {
      if (cs[idx - 1] == c) out.push_back(name + ": duplicate");
      else if (c < cs[idx - 1]) out.push_back(name + ": out of canonical order");
    }
  }
  return out;
}

std::vector<EnConstraint> full_universe(std::size_t n) {
  std::vector<EnConstraint> out;
  const auto m = static_cast<std::uint32_t>(n);
  for (std::uint32_t i = 1; i <= m; ++i) out.push_back(EnConstraint::unit(i));
  for (auto kind : {EnConstraint::Kind::Add, EnConstraint::Kind::Mul})
    for (std::uint32_t i = 1; i <= m; ++i)
      for (std::uint32_t j = i; j <= m; ++j)
        for (std::uint32_t k = 1; k <= m; ++k) out.push_back(EnConstraint::raw(kind, i, j, k));
  return out;
}

namespace {

template <typename Visit>
void for_each_image(const EnSystem& sys, std::size_t limit, Visit&& visit) {
  if (sys.n() > limit) {
    throw std::invalid_argument("canonical form refused: n=" + std::to_string(sys.n()) +
                                " exceeds the permutation limit " + std::to_string(limit));
  }
  std::vector<std::uint32_t> perm(sys.n());
  std::iota(perm.begin(), perm.end(), 1U);
  std::vector<EnConstraint> image(sys.size());
  do {
    for (std::size_t c = 0; c < sys.size(); ++c) image[c] = sys.constraints()[c].renamed(perm);
    std::sort(image.begin(), image.end());
    visit(image);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

EnSystem canonical_form(const EnSystem& sys, std::size_t permutation_limit) {
  std::vector<EnConstraint> best;
  bool first = true;
  for_each_image(sys, permutation_limit, [&](const std::vector<EnConstraint>& image) {
    if (first || image < best) {
      best = image;
      first = false;
    }
  });
  return EnSystem::unchecked(sys.n(), std::move(best));
}

std::size_t orbit_size(const EnSystem& sys, std::size_t permutation_limit) {
  std::vector<std::vector<EnConstraint>> images;
  for_each_image(sys, permutation_limit, [&](const std::vector<EnConstraint>& image) { images.push_back(image); });
  std::sort(images.begin(), images.end());
  return static_cast<std::size_t>(std::unique(images.begin(), images.end()) - images.begin());
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint32_t parse_index(const std::string& digits, std::size_t pos, const std::string& eq) {
  if (digits.size() > 9) throw ParseError("index too large in '" + eq + "'", pos);
  const auto v = static_cast<std::uint32_t>(std::stoul(digits));
  if (v == 0) throw ParseError("variable index 0 in '" + eq + "'", pos);
  return v;
}

}  // namespace

EnSystem parse_system(std::string_view text) {
  static const std::regex unit_re(R"(x(\d+)\s*=\s*1)");
  static const std::regex binary_re(R"(x(\d+)\s*([+*])\s*x(\d+)\s*=\s*x(\d+))");
  static const std::regex width_re(R"(n\s*=\s*(\d+))");
  std::vector<EnConstraint> cs;
  std::size_t declared_n = 0;
  std::size_t max_index = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = start;
    while (end < text.size() && text[end] != ';' && text[end] != '\n' && text[end] != '#') ++end;
    const std::string eq = trim(text.substr(start, end - start));
    if (end < text.size() && text[end] == '#')
      while (end < text.size() && text[end] != '\n') ++end;
    if (!eq.empty()) {
      std::smatch m;
      if (std::regex_match(eq, m, unit_re)) {
        cs.push_back(EnConstraint::unit(parse_index(m[1], start, eq)));
      } else if (std::regex_match(eq, m, binary_re)) {
        const auto i = parse_index(m[1], start, eq);
        const auto j = parse_index(m[3], start, eq);
        const auto k = parse_index(m[4], start, eq);
        cs.push_back(m[2] == "+" ? EnConstraint::add(i, j, k) : EnConstraint::mul(i, j, k));
      } else if (std::regex_match(eq, m, width_re)) {
        declared_n = std::stoul(m[1]);
      } else {
        throw ParseError("not an admissible equation shape: '" + eq + "'", start);
      }
      if (!cs.empty()) max_index = std::max<std::size_t>(max_index, cs.back().max_index());
    }
    start = end + 1;
  }
  const std::size_t n = std::max(declared_n, max_index);
  if (n == 0) throw ParseError("system mentions no variable", 0);
  return EnSystem(n, std::move(cs));
}

EnSystem parse_system_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  const auto bad = [](const std::string& what) { return ParseError(what, 0); };
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("constraints"))
    throw bad("system JSON needs fields \"n\" and \"constraints\"");
  if (!doc["n"].is_number_unsigned()) throw bad("\"n\" must be a non-negative integer");
  const auto n = doc["n"].get<std::size_t>();
  std::vector<EnConstraint> cs;
  for (const auto& item : doc["constraints"]) {
    if (!item.is_array() || item.empty() || !item[0].is_string()) throw bad("malformed constraint " + item.dump());
    const auto tag = item[0].get<std::string>();
    std::vector<std::uint32_t> idx;
    for (std::size_t a = 1; a < item.size(); ++a) {
      if (!item[a].is_number_unsigned() || item[a].get<std::uint64_t>() == 0 ||
          item[a].get<std::uint64_t>() > 1'000'000'000ULL)
        throw bad("bad index in constraint " + item.dump());
      idx.push_back(item[a].get<std::uint32_t>());
    }
    if (tag == "unit" && idx.size() == 1) cs.push_back(EnConstraint::unit(idx[0]));
    else if (tag == "add" && idx.size() == 3) cs.push_back(EnConstraint::add(idx[0], idx[1], idx[2]));
    else if (tag == "mul" && idx.size() == 3) cs.push_back(EnConstraint::mul(idx[0], idx[1], idx[2]));
    else throw bad("not an admissible constraint: " + item.dump());
  }
  try {
    return EnSystem(n, std::move(cs));
  } catch (const std::invalid_argument& e) {
    throw bad(e.what());
  }
}

std::string serialize_system(const EnSystem& sys, SystemFormat format) {
  std::string out;
  if (format == SystemFormat::Json) {
    out = "{\"n\": " + std::to_string(sys.n()) + ", \"constraints\": [";
    bool first = true;
    for (const auto& c : sys.constraints()) {
      if (!first) out += ", ";
      first = false;
      out += "[\"" + std::string(kind_name(c.kind)) + "\"," + std::to_string(c.i);
      if (c.kind != EnConstraint::Kind::Unit)
        out += "," + std::to_string(c.j) + "," + std::to_string(c.k);
      out += "]";
    }
    return out + "]}";
  }
  std::size_t max_index = 0;
  for (const auto& c : sys.constraints()) max_index = std::max<std::size_t>(max_index, c.max_index());
  if (max_index < sys.n()) out = "n=" + std::to_string(sys.n());
  for (const auto& c : sys.constraints()) {
    if (!out.empty()) out += "; ";
    out += c.to_string();
  }
  return out;
}

}  // namespace ensys
