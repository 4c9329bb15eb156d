#pragma once

/**
 * @file catalog.hpp
 * @brief Plan catalog: a line-oriented stanza format, its parser, validator
 *        and serializer.
 *
 * Grammar (UTF-8, one item per line, '#' starts a comment):
 *
 *   [plan <id>]
 *   provider=<text>          required
 *   name=<text>              optional, defaults to the id
 *   segment=consumer|business
 *   currency=EUR|USD
 *   model=bundle|block_rate|two_part|per_seat|unlimited_flat
 *   free_gb=<number>                       bundle
 *   tier=<cap_gb> [<fee> <monthly|yearly>] bundle, repeatable
 *   bracket=<upper_gb> <price_per_gb_month> block_rate, repeatable
 *   declining=true|false                   block_rate
 *   f=<number>  v=<number>                 two_part
 *   base_users=<int> base_fee_yearly=<number> per_user_fee_yearly=<number>
 *   gb_per_user=<number> [base_gb=<number>] per_seat
 *   fee=<number> <monthly|yearly>          unlimited_flat
 *   note=<text>                            repeatable, comments not stripped
 *
 * Numbers are plain decimals with '.' as separator. A bundle whose tiers
 * carry only capacities (or that has no tiers) is a capacity-only plan: it
 * parses with a warning and is never priced.
 */

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tariff/errors.hpp"
#include "tariff/money.hpp"
#include "tariff/plans.hpp"
#include "tariff/pricing.hpp"

namespace tariff {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string plan_id;
  std::string message;
  int line = 0;  // 0 when not tied to a source line

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error" : "warning";
  if (d.line > 0) out += ": line " + std::to_string(d.line);
  if (!d.plan_id.empty()) out += ": [" + d.plan_id + "]";
  return out + ": " + d.message;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

struct Catalog {
  std::vector<PricingPlan> plans;
  std::map<std::string, std::vector<std::string>> source_notes;

  const PricingPlan* find(std::string_view id) const {
    for (const auto& p : plans)
      if (p.id == id) return &p;
    return nullptr;
  }

  std::vector<PricingPlan> in_segment(Segment segment) const {
    std::vector<PricingPlan> out;
    for (const auto& p : plans)
      if (p.segment == segment) out.push_back(p);
    return out;
  }

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

struct ParseResult {
  std::optional<Catalog> catalog;  // present iff no Error diagnostics
  std::vector<Diagnostic> diagnostics;
};

/// Re-checks every plan invariant and id uniqueness. Line numbers are 0.
inline std::vector<Diagnostic> validate(const Catalog& catalog) {
  std::vector<Diagnostic> out;
  std::set<std::string> ids;
  for (const auto& plan : catalog.plans) {
    if (!ids.insert(plan.id).second)
      out.push_back({Severity::Error, plan.id, "duplicate plan id", 0});
    for (auto& v : check_invariants(plan))
      out.push_back({v.is_error ? Severity::Error : Severity::Warning, plan.id, std::move(v.message), 0});
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    i += len;
  }
  return true;
}

inline bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
           c == '_' || c == '.';
  });
}

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, ptr);
}

// Raw field values of one stanza, before they are turned into a plan.
struct Stanza {
  struct Fee {
    double amount = 0.0;
    BillingPeriod period = BillingPeriod::Monthly;
  };
  struct Tier {
    double cap = 0.0;
    std::optional<Fee> fee;
  };

  std::string id;
  int line = 0;
  bool broken = false;
  std::map<std::string, std::string> scalars;           // single-valued keys, raw text
  std::vector<std::pair<std::string, int>> key_lines;   // every key seen, for applicability checks
  std::vector<Tier> tiers;
  std::vector<std::pair<double, double>> brackets;
  std::vector<std::string> notes;
};

class Parser {
 public:
  ParseResult run(std::string_view text) {
    if (!valid_utf8(text)) {
      error("", "input is not valid UTF-8", 0);
      return finish();
    }
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      ++line_no;
      handle_line(text.substr(pos, nl - pos), line_no);
      pos = nl + 1;
    }
    close_stanza();
    if (catalog_.plans.empty() && !has_errors(diags_))
      diags_.push_back({Severity::Warning, "", "catalog contains no plans", 0});
    return finish();
  }

 private:
  void error(const std::string& id, std::string msg, int line) {
    diags_.push_back({Severity::Error, id, std::move(msg), line});
    if (current_) current_->broken = true;
  }
  void warning(const std::string& id, std::string msg, int line) {
    diags_.push_back({Severity::Warning, id, std::move(msg), line});
  }

  ParseResult finish() {
    ParseResult result;
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics)) result.catalog = std::move(catalog_);
    return result;
  }

  void handle_line(std::string_view raw, int line) {
    std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') return;

    if (s.front() == '[') {
      close_stanza();
      if (s.back() != ']' || s.substr(0, 5) != "[plan") {
        error("", "malformed stanza header", line);
        return;
      }
      std::string_view id = trim(s.substr(5, s.size() - 6));
      if (s.size() < 7 || (s[5] != ' ' && s[5] != '\t') || !valid_id(id)) {
        error("", "malformed stanza header", line);
        return;
      }
      current_ = Stanza{};
      current_->id = std::string(id);
      current_->line = line;
      if (!ids_.insert(current_->id).second) error(current_->id, "duplicate plan id", line);
      return;
    }

    auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      error(current_ ? current_->id : "", "expected key=value", line);
      return;
    }
    std::string key(trim(s.substr(0, eq)));
    std::string_view value = trim(s.substr(eq + 1));
    if (!current_) {
      error("", "key '" + key + "' outside of a [plan] stanza", line);
      return;
    }
    if (key != "note") {
      auto hash = value.find('#');
      if (hash != std::string_view::npos) value = trim(value.substr(0, hash));
    }
    handle_key(*current_, key, value, line);
  }

  std::optional<double> number(Stanza& st, std::string_view text, std::string_view key, int line) {
    try {
      return from_decimal<double>(text);
    } catch (const InvalidArgument&) {
      error(st.id, "malformed number '" + std::string(text) + "' for key '" + std::string(key) + "'", line);
      return std::nullopt;
    }
  }

  std::optional<BillingPeriod> period(Stanza& st, std::string_view text, int line) {
    if (text == "monthly") return BillingPeriod::Monthly;
    if (text == "yearly") return BillingPeriod::Yearly;
    error(st.id, "billing period must be monthly or yearly, got '" + std::string(text) + "'", line);
    return std::nullopt;
  }

  void handle_key(Stanza& st, const std::string& key, std::string_view value, int line) {
    static const std::set<std::string> scalar_keys = {
        "provider", "name", "segment", "currency", "model", "free_gb", "declining", "f", "v",
        "base_users", "base_fee_yearly", "per_user_fee_yearly", "gb_per_user", "base_gb", "fee"};

    st.key_lines.emplace_back(key, line);
    if (key == "note") {
      st.notes.emplace_back(value);
      return;
    }
    if (key == "tier") {
      auto parts = split_ws(value);
      if (parts.size() != 1 && parts.size() != 3) {
        error(st.id, "tier expects '<cap_gb> [<fee> <monthly|yearly>]'", line);
        return;
      }
      auto cap = number(st, parts[0], key, line);
      Stanza::Tier tier;
      if (cap) tier.cap = *cap;
      if (parts.size() == 3) {
        auto fee = number(st, parts[1], key, line);
        auto per = period(st, parts[2], line);
        if (fee && per) tier.fee = Stanza::Fee{*fee, *per};
      }
      st.tiers.push_back(tier);
      return;
    }
    if (key == "bracket") {
      auto parts = split_ws(value);
      if (parts.size() != 2) {
        error(st.id, "bracket expects '<upper_gb> <price_per_gb_month>'", line);
        return;
      }
      auto upper = number(st, parts[0], key, line);
      auto price = number(st, parts[1], key, line);
      if (upper && price) st.brackets.emplace_back(*upper, *price);
      return;
    }
    if (!scalar_keys.count(key)) {
      warning(st.id, "unknown key '" + key + "' ignored", line);
      st.key_lines.pop_back();
      return;
    }
    if (st.scalars.count(key)) {
      error(st.id, "duplicate key '" + key + "'", line);
      return;
    }
    st.scalars[key] = std::string(value);
  }

  void close_stanza() {
    if (!current_) return;
    build(*current_);
    current_.reset();
  }

  const std::string* scalar(const Stanza& st, const std::string& key) const {
    auto it = st.scalars.find(key);
    return it == st.scalars.end() ? nullptr : &it->second;
  }

  void build(Stanza& st) {
    PricingPlan plan;
    plan.id = st.id;
    auto require = [&](const std::string& key) -> const std::string* {
      const std::string* v = scalar(st, key);
      if (!v) error(st.id, "missing key '" + key + "'", st.line);
      return v;
    };

    if (const auto* v = require("provider")) plan.provider = *v;
    plan.plan_name = scalar(st, "name") ? *scalar(st, "name") : st.id;
    if (const auto* v = require("segment")) {
      if (*v == "consumer") plan.segment = Segment::Consumer;
      else if (*v == "business") plan.segment = Segment::Business;
      else error(st.id, "segment must be consumer or business, got '" + *v + "'", st.line);
    }
    if (const auto* v = require("currency")) {
      if (*v == "EUR") plan.currency = Currency::EUR;
      else if (*v == "USD") plan.currency = Currency::USD;
      else error(st.id, "currency must be EUR or USD, got '" + *v + "'", st.line);
    }
    const std::string* model = require("model");
    static const std::map<std::string, std::set<std::string>> model_keys = {
        {"bundle", {"free_gb", "tier"}},
        {"block_rate", {"bracket", "declining"}},
        {"two_part", {"f", "v"}},
        {"per_seat", {"base_users", "base_fee_yearly", "per_user_fee_yearly", "gb_per_user", "base_gb"}},
        {"unlimited_flat", {"fee"}},
    };
    static const std::set<std::string> common_keys = {"provider", "name", "segment", "currency", "model", "note"};
    if (model && !model_keys.count(*model)) {
      error(st.id, "unknown model '" + *model + "'", st.line);
      model = nullptr;
    }
    if (model) {
      const auto& allowed = model_keys.at(*model);
      for (const auto& [key, line] : st.key_lines)
        if (!common_keys.count(key) && !allowed.count(key))
          warning(st.id, "key '" + key + "' does not apply to model " + *model + " and is ignored", line);
    }
    if (st.broken || !model) return;

    auto num = [&](const std::string& key, bool required) -> std::optional<double> {
      const std::string* v = required ? require(key) : scalar(st, key);
      if (!v) return std::nullopt;
      return number(st, *v, key, st.line);
    };
    auto money = [&](double amount) { return Money(amount, plan.currency); };
    auto nonneg = [&](std::optional<double> v, const std::string& key) {
      if (v && *v < 0.0) {
        error(st.id, "value of '" + key + "' must be non-negative", st.line);
        return false;
      }
      return v.has_value();
    };

    if (*model == "bundle") {
      double free = num("free_gb", false).value_or(0.0);
      std::size_t priced = std::count_if(st.tiers.begin(), st.tiers.end(), [](const auto& t) { return t.fee.has_value(); });
      if (priced != 0 && priced != st.tiers.size()) {
        error(st.id, "tiers must either all carry fees or none", st.line);
        return;
      }
      if (priced == 0) {
        CapacityOnlyPlan c{CapacityGB(free), {}};
        for (const auto& t : st.tiers) c.caps.emplace_back(t.cap);
        plan.model = c;
      } else {
        BundlePlan b{CapacityGB(free), {}};
        for (const auto& t : st.tiers) b.tiers.push_back({CapacityGB(t.cap), money(t.fee->amount), t.fee->period});
        plan.model = b;
      }
    } else if (*model == "block_rate") {
      BlockRateTariff t;
      if (const auto* d = scalar(st, "declining")) {
        if (*d == "true") t.declining = true;
        else if (*d == "false") t.declining = false;
        else return error(st.id, "declining must be true or false", st.line);
      }
      for (const auto& [upper, price] : st.brackets) t.brackets.push_back({CapacityGB(upper), money(price)});
      plan.model = t;
    } else if (*model == "two_part") {
      auto f = num("f", true);
      auto v = num("v", true);
      if (!nonneg(f, "f") || !nonneg(v, "v")) return;
      plan.model = TwoPartTariff{money(*f), money(*v)};
    } else if (*model == "per_seat") {
      const std::string* users_text = require("base_users");
      auto base = num("base_fee_yearly", true);
      auto per_user = num("per_user_fee_yearly", true);
      auto per_gb = num("gb_per_user", true);
      auto base_gb = num("base_gb", false);
      if (!users_text || !base || !per_user || !per_gb) return;
      long long users = 0;
      auto [ptr, ec] = std::from_chars(users_text->data(), users_text->data() + users_text->size(), users);
      if (ec != std::errc{} || ptr != users_text->data() + users_text->size() || users > 1'000'000'000)
        return error(st.id, "base_users must be an integer", st.line);
      PerSeatPlan p;
      p.base_users = static_cast<int>(users);
      p.base_fee_yearly = money(*base);
      p.per_user_fee_yearly = money(*per_user);
      p.gb_per_user = CapacityGB(*per_gb);
      if (base_gb) p.base_capacity = CapacityGB(*base_gb);
      plan.model = p;
    } else if (*model == "unlimited_flat") {
      const std::string* text = require("fee");
      if (!text) return;
      auto parts = split_ws(*text);
      if (parts.size() != 2) return error(st.id, "fee expects '<number> <monthly|yearly>'", st.line);
      auto amount = number(st, parts[0], "fee", st.line);
      auto per = period(st, parts[1], st.line);
      if (!amount || !per) return;
      plan.model = UnlimitedFlat{money(*amount), *per};
    }
    if (st.broken) return;

    for (auto& v : check_invariants(plan)) {
      if (v.is_error) error(st.id, std::move(v.message), st.line);
      else warning(st.id, std::move(v.message), st.line);
    }
    if (!st.notes.empty()) catalog_.source_notes[st.id] = st.notes;
    catalog_.plans.push_back(std::move(plan));
  }

  Catalog catalog_;
  std::vector<Diagnostic> diags_;
  std::optional<Stanza> current_;
  std::set<std::string> ids_;
};

}  // namespace detail

/// Parses catalog text. The catalog is returned iff there are no Error
/// diagnostics; warnings (unknown keys, capacity-only plans, an empty input)
/// do not block it.
inline ParseResult parse_catalog(std::string_view text) { return detail::Parser{}.run(text); }

/// Reads and parses a catalog file. Throws LookupError if it cannot be read.
inline ParseResult load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open catalog '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str());
}

/// Writes a catalog back in the stanza format; parse_catalog() of the result
/// reproduces an equal Catalog.
inline std::string serialize_catalog(const Catalog& catalog) {
  using detail::format_number;
  std::ostringstream out;
  bool first = true;
  for (const auto& plan : catalog.plans) {
    if (!first) out << '\n';
    first = false;
    out << "[plan " << plan.id << "]\n";
    out << "provider=" << plan.provider << '\n';
    if (plan.plan_name != plan.id) out << "name=" << plan.plan_name << '\n';
    out << "segment=" << to_string(plan.segment) << '\n';
    out << "currency=" << to_string(plan.currency) << '\n';
    std::visit(detail::overloaded{
                   [&](const BundlePlan& b) {
                     out << "model=bundle\nfree_gb=" << format_number(b.free_gb.value()) << '\n';
                     for (const auto& t : b.tiers)
                       out << "tier=" << format_number(t.cap.value()) << ' ' << format_number(t.fee.amount()) << ' '
                           << to_string(t.period) << '\n';
                   },
                   [&](const CapacityOnlyPlan& c) {
                     out << "model=bundle\nfree_gb=" << format_number(c.free_gb.value()) << '\n';
                     for (const auto& cap : c.caps) out << "tier=" << format_number(cap.value()) << '\n';
                   },
                   [&](const BlockRateTariff& t) {
                     out << "model=block_rate\ndeclining=" << (t.declining ? "true" : "false") << '\n';
                     for (const auto& b : t.brackets)
                       out << "bracket=" << format_number(b.upper.value()) << ' '
                           << format_number(b.marginal.amount()) << '\n';
                   },
                   [&](const TwoPartTariff& t) {
                     out << "model=two_part\nf=" << format_number(t.fixed_fee.amount())
                         << "\nv=" << format_number(t.marginal.amount()) << '\n';
                   },
                   [&](const PerSeatPlan& p) {
                     out << "model=per_seat\nbase_users=" << p.base_users
                         << "\nbase_fee_yearly=" << format_number(p.base_fee_yearly.amount())
                         << "\nper_user_fee_yearly=" << format_number(p.per_user_fee_yearly.amount())
                         << "\ngb_per_user=" << format_number(p.gb_per_user.value()) << '\n';
                     if (p.base_capacity) out << "base_gb=" << format_number(p.base_capacity->value()) << '\n';
                   },
                   [&](const UnlimitedFlat& u) {
                     out << "model=unlimited_flat\nfee=" << format_number(u.fee.amount()) << ' '
                         << to_string(u.period) << '\n';
                   },
               },
               plan.model);
    if (auto it = catalog.source_notes.find(plan.id); it != catalog.source_notes.end())
      for (const auto& note : it->second) out << "note=" << note << '\n';
  }
  return out.str();
}

}  // namespace tariff
