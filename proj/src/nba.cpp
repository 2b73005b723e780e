#include "ltldstar/nba.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <sstream>

#include "ltldstar/errors.hpp"

namespace ltldstar {

Nba::Nba(SharedUniverse ap, std::size_t num_states, std::vector<std::size_t> initial,
         std::vector<bool> accepting, std::vector<NbaTransition> transitions)
    : ap_(std::move(ap)),
      num_states_(num_states),
      initial_(std::move(initial)),
      accepting_(std::move(accepting)),
      transitions_(std::move(transitions)) {
  if (!ap_) throw UsageError("NBA without proposition universe");
  if (num_states_ == 0) throw UsageError("NBA with no states");
  if (initial_.empty()) throw UsageError("NBA with no initial state");
  if (accepting_.size() != num_states_) throw UsageError("accepting mask size mismatch");
  for (auto q : initial_) {
    if (q >= num_states_) throw UsageError("initial state out of range");
  }
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> grouped;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (t.from >= num_states_ || t.to >= num_states_) {
      throw UsageError("transition endpoint out of range");
    }
    if (t.guard.arity() > ap_->size()) {
      throw UsageError("guard references a proposition outside the universe");
    }
    grouped[{t.from, t.to}].push_back(i);
  }
  for (auto& [pair, idx] : grouped) {
    pairs_.push_back(pair);
    pair_transitions_.push_back(std::move(idx));
  }
}

std::size_t Nba::num_accepting() const {
  return static_cast<std::size_t>(std::count(accepting_.begin(), accepting_.end(), true));
}

const std::vector<std::size_t>& Nba::transitions_between(std::size_t q_m, std::size_t q_n) const {
  static const std::vector<std::size_t> kNone;
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::make_pair(q_m, q_n));
  if (it == pairs_.end() || *it != std::make_pair(q_m, q_n)) return kNone;
  return pair_transitions_[static_cast<std::size_t>(it - pairs_.begin())];
}

bool Nba::enabled(std::size_t q_m, std::size_t q_n, std::uint64_t label_bits) const {
  for (auto i : transitions_between(q_m, q_n)) {
    if (transitions_[i].guard.eval(label_bits)) return true;
  }
  return false;
}

std::uint64_t Nba::pair_support(std::size_t q_m, std::size_t q_n) const {
  std::uint64_t s = 0;
  for (auto i : transitions_between(q_m, q_n)) s |= transitions_[i].guard.support();
  return s;
}

std::vector<Label> chi(const Nba& nba, std::size_t q_m, std::size_t q_n) {
  const std::size_t r = nba.ap()->size();
  if (r > 20) throw UsageError("chi enumeration limited to 20 propositions");
  if (q_m >= nba.num_states() || q_n >= nba.num_states()) {
    throw UsageError("NBA state out of range");
  }
  std::vector<Label> out;
  const std::uint64_t n = std::uint64_t{1} << r;
  for (std::uint64_t bits = 0; bits < n; ++bits) {
    if (nba.enabled(q_m, q_n, bits)) out.emplace_back(nba.ap(), bits);
  }
  return out;
}

std::optional<int> min_violation(const Nba& nba, std::size_t q_m, std::size_t q_n,
                                 std::uint64_t label_bits) {
  if (nba.transitions_between(q_m, q_n).empty()) return std::nullopt;
  if (nba.enabled(q_m, q_n, label_bits)) return 0;
  // Only propositions in the guards' support can change satisfaction; every
  // other bit is kept as in the label, contributing nothing to rho.
  const std::uint64_t support = nba.pair_support(q_m, q_n);
  if (std::popcount(support) > 24) {
    throw UsageError("guard support too large for violation enumeration");
  }
  const std::uint64_t fixed = label_bits & ~support;
  std::optional<int> best;
  std::uint64_t sub = 0;
  do {
    const std::uint64_t candidate = fixed | sub;
    if (nba.enabled(q_m, q_n, candidate)) {
      const int d = rho_bits(label_bits, candidate);
      if (!best || d < *best) best = d;
    }
    sub = (sub - support) & support;
  } while (sub != 0);
  return best;
}

// ---------------------------------------------------------------------------
// HOA v1 subset

namespace {

struct Token {
  enum class Type { kHeader, kIdent, kInt, kString, kPunct, kBody, kEnd, kEof };
  Type type;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    const int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Token::Type::kEof, "", line, col};
    const char c = text_[pos_];
    if (text_.substr(pos_, 8) == "--BODY--") {
      advance(8);
      return {Token::Type::kBody, "--BODY--", line, col};
    }
    if (text_.substr(pos_, 7) == "--END--") {
      advance(7);
      return {Token::Type::kEnd, "--END--", line, col};
    }
    if (c == '"') {
      advance(1);
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance(1);
        s += text_[pos_];
        advance(1);
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", line, col);
      advance(1);
      return {Token::Type::kString, s, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        s += text_[pos_];
        advance(1);
      }
      return {Token::Type::kInt, s, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '-' || text_[pos_] == '.')) {
        s += text_[pos_];
        advance(1);
      }
      if (pos_ < text_.size() && text_[pos_] == ':') {
        advance(1);
        return {Token::Type::kHeader, s, line, col};
      }
      return {Token::Type::kIdent, s, line, col};
    }
    advance(1);
    return {Token::Type::kPunct, std::string(1, c), line, col};
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance(1);
      if (text_.substr(pos_, 2) == "/*") {
        const auto end = text_.find("*/", pos_ + 2);
        advance((end == std::string_view::npos ? text_.size() : end + 2) - pos_);
        continue;
      }
      return;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class HoaParser {
 public:
  explicit HoaParser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  Nba parse() {
    parse_header();
    parse_body();
    if (!num_states_) throw ParseError("missing States: header", tok_.line, tok_.column);
    std::vector<bool> accepting(*num_states_, false);
    for (auto q : accepting_states_) {
      if (q >= *num_states_) throw ParseError("state index out of range", 1, 1);
      accepting[q] = true;
    }
    for (const auto& t : transitions_) {
      if (t.from >= *num_states_ || t.to >= *num_states_) {
        throw ParseError("transition endpoint out of range", 1, 1);
      }
    }
    return Nba(universe_, *num_states_, initial_, std::move(accepting), std::move(transitions_));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.line, tok_.column); }

  Token take() {
    Token t = tok_;
    tok_ = lex_.next();
    return t;
  }

  bool at_punct(char c) const { return tok_.type == Token::Type::kPunct && tok_.text[0] == c; }

  void expect_punct(char c) {
    if (!at_punct(c)) fail(std::string("expected '") + c + "'");
    take();
  }

  std::size_t expect_int() {
    if (tok_.type != Token::Type::kInt) fail("expected integer");
    return static_cast<std::size_t>(std::stoull(take().text));
  }

  void parse_header() {
    if (tok_.type != Token::Type::kHeader || tok_.text != "HOA") fail("expected 'HOA:' header");
    take();
    if (tok_.type != Token::Type::kIdent || tok_.text != "v1") fail("only HOA v1 is supported");
    take();
    bool have_acceptance = false;
    bool have_acc_name = false;
    while (tok_.type == Token::Type::kHeader) {
      const Token h = take();
      if (h.text == "States") {
        num_states_ = expect_int();
      } else if (h.text == "Start") {
        initial_.push_back(expect_int());
        if (at_punct('&')) fail("conjunctive initial states (alternation) are not supported");
      } else if (h.text == "AP") {
        const auto n = expect_int();
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) {
          if (tok_.type != Token::Type::kString) fail("expected quoted proposition name");
          names.push_back(take().text);
        }
        try {
          universe_ = std::make_shared<const APUniverse>(std::move(names));
        } catch (const UsageError& e) {
          throw ParseError(e.what(), h.line, h.column);
        }
      } else if (h.text == "Acceptance") {
        const auto sets = expect_int();
        std::string cond;
        while (tok_.type != Token::Type::kHeader && tok_.type != Token::Type::kBody &&
               tok_.type != Token::Type::kEof) {
          cond += take().text;
        }
        if (sets != 1 || cond != "Inf(0)") {
          throw UnsupportedFeature("acceptance condition '" + std::to_string(sets) + " " + cond +
                                   "' is not Buchi");
        }
        have_acceptance = true;
      } else if (h.text == "acc-name") {
        if (tok_.type != Token::Type::kIdent) fail("expected acceptance name");
        const auto name = take().text;
        if (name != "Buchi") throw UnsupportedFeature("acc-name '" + name + "' is not Buchi");
        while (tok_.type == Token::Type::kInt || tok_.type == Token::Type::kIdent) take();
        have_acc_name = true;
      } else if (std::isupper(static_cast<unsigned char>(h.text[0]))) {
        throw UnsupportedFeature("header '" + h.text + ":' is not supported");
      } else {
        // Lower-case headers (name, tool, properties, ...) carry no semantics here.
        while (tok_.type != Token::Type::kHeader && tok_.type != Token::Type::kBody &&
               tok_.type != Token::Type::kEof) {
          take();
        }
      }
    }
    if (!num_states_) fail("missing States: header");
    if (initial_.empty()) fail("missing Start: header");
    if (!universe_) fail("missing AP: header");
    if (!have_acceptance) fail("missing Acceptance: header");
    if (!have_acc_name) fail("missing acc-name: header");
  }

  void parse_body() {
    if (tok_.type != Token::Type::kBody) fail("expected --BODY--");
    take();
    std::optional<std::size_t> current;
    while (tok_.type != Token::Type::kEnd) {
      if (tok_.type == Token::Type::kEof) fail("missing --END--");
      if (tok_.type == Token::Type::kHeader && tok_.text == "State") {
        take();
        if (at_punct('[')) throw UnsupportedFeature("state-labelled automata are not supported");
        current = expect_int();
        if (tok_.type == Token::Type::kString) take();
        if (at_punct('{')) {
          take();
          while (!at_punct('}')) {
            const auto set = expect_int();
            if (set != 0) fail("acceptance set index out of range");
            accepting_states_.push_back(*current);
          }
          take();
        }
        continue;
      }
      if (!current) fail("transition before any State:");
      if (!at_punct('[')) {
        if (tok_.type == Token::Type::kInt) {
          throw UnsupportedFeature("implicit transition labels are not supported");
        }
        fail("expected '[' starting a transition label");
      }
      take();
      Guard g = parse_or();
      expect_punct(']');
      const auto dest = expect_int();
      if (at_punct('&')) throw UnsupportedFeature("universal branching is not supported");
      if (at_punct('{')) throw UnsupportedFeature("transition-based acceptance is not supported");
      transitions_.push_back({*current, std::move(g), dest});
    }
    take();
  }

  Guard parse_or() {
    Guard g = parse_and();
    while (at_punct('|')) {
      take();
      g = Guard::disj(std::move(g), parse_and());
    }
    return g;
  }

  Guard parse_and() {
    Guard g = parse_unary();
    while (at_punct('&')) {
      take();
      g = Guard::conj(std::move(g), parse_unary());
    }
    return g;
  }

  Guard parse_unary() {
    if (at_punct('!')) {
      take();
      return Guard::negate(parse_unary());
    }
    if (at_punct('(')) {
      take();
      Guard g = parse_or();
      expect_punct(')');
      return g;
    }
    if (tok_.type == Token::Type::kIdent && (tok_.text == "t" || tok_.text == "f")) {
      return take().text == "t" ? Guard::truth() : Guard::falsity();
    }
    if (tok_.type == Token::Type::kInt) {
      const auto idx = std::stoull(tok_.text);
      if (universe_ && idx >= universe_->size()) fail("proposition index out of range");
      take();
      return Guard::prop(idx);
    }
    if (tok_.type == Token::Type::kString || tok_.type == Token::Type::kIdent) {
      fail("aliases and named propositions are not supported in guards");
    }
    fail("unexpected token in guard");
  }

  Lexer lex_;
  Token tok_;
  std::optional<std::size_t> num_states_;
  std::vector<std::size_t> initial_;
  SharedUniverse universe_;
  std::vector<std::size_t> accepting_states_;
  std::vector<NbaTransition> transitions_;
};

}  // namespace

Nba parse_nba(std::string_view text) { return HoaParser(text).parse(); }

std::string to_hoa(const Nba& nba, std::string_view name) {
  std::ostringstream os;
  os << "HOA: v1\n";
  if (!name.empty()) os << "name: \"" << name << "\"\n";
  os << "States: " << nba.num_states() << '\n';
  for (auto q : nba.initial()) os << "Start: " << q << '\n';
  os << "AP: " << nba.ap()->size();
  for (const auto& n : nba.ap()->names()) os << " \"" << n << '"';
  os << "\nacc-name: Buchi\nAcceptance: 1 Inf(0)\n--BODY--\n";
  for (std::size_t q = 0; q < nba.num_states(); ++q) {
    os << "State: " << q;
    if (nba.is_accepting(q)) os << " {0}";
    os << '\n';
    for (const auto& t : nba.transitions()) {
      if (t.from == q) os << '[' << t.guard.to_string() << "] " << t.to << '\n';
    }
  }
  os << "--END--\n";
  return os.str();
}

Nba sequencing_nba(const std::vector<std::string>& regions) {
  const std::size_t m = regions.size();
  if (m < 2) throw UsageError("sequencing automaton needs at least two regions");
  auto ap = std::make_shared<const APUniverse>(regions);
  auto stay = [&](std::size_t target) {
    Guard g = Guard::truth();
    bool first = true;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == target && target != 0) continue;
      Guard neg = Guard::negate(Guard::prop(r));
      g = first ? neg : Guard::conj(g, neg);
      first = false;
    }
    return g;
  };
  auto wait = [](std::size_t i) { return i + 1; };  // i in 1..m; i == m waits for r0
  std::vector<NbaTransition> t;
  t.push_back({0, Guard::prop(0), 1});
  t.push_back({0, Guard::negate(Guard::prop(0)), 0});
  t.push_back({1, Guard::prop(1), wait(2)});
  t.push_back({1, stay(1), wait(1)});
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t target = i % m;
    t.push_back({wait(i), Guard::prop(target), i == m ? 1 : wait(i + 1)});
    t.push_back({wait(i), stay(target), wait(i)});
  }
  std::vector<bool> accepting(m + 2, false);
  accepting[1] = true;
  return Nba(std::move(ap), m + 2, {0}, std::move(accepting), std::move(t));
}

}  // namespace ltldstar
