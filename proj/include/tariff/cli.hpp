#pragma once

/**
 * @file cli.hpp
 * @brief Implementation of the `tariffctl` command line front end.
 *
 * Kept in a header so the commands can be driven in-process (tests) as well
 * as from tools/tariffctl.cpp. Output is CSV (header row, LF endings, '.'
 * decimals, prices rounded to 4 decimals) or an aligned plain-text table.
 *
 * Exit codes: 0 success, 1 internal error, 2 lookup / empty input / usage,
 * 3 domain error (unpriceable plan, empty sample, catalog with errors).
 */

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tariff/catalog.hpp"
#include "tariff/errors.hpp"
#include "tariff/fitting.hpp"
#include "tariff/money.hpp"
#include "tariff/pareto.hpp"
#include "tariff/plans.hpp"
#include "tariff/pricing.hpp"

#ifndef TARIFF_DEFAULT_CATALOG
#define TARIFF_DEFAULT_CATALOG "data/catalog.txt"
#endif

namespace tariff::cli {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr const char* kCatalogEnv = "TARIFF_CATALOG";

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitLookup = 2, kExitDomain = 3 };

enum class OutputFormat { Csv, Table };

// Raised for malformed command arguments; maps to kExitLookup.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Prices and unit prices are rendered with 4 decimals.
inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

inline std::string scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string gb(double v) { return tariff::detail::format_number(v); }

struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void render(std::ostream& out, OutputFormat format) const {
    if (format == OutputFormat::Csv) {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
      };
      line(header);
      for (const auto& r : rows) line(r);
      return;
    }
    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) width[i] = std::max(width[i], cells[i].size());
    };
    measure(header);
    for (const auto& r : rows) measure(r);
    auto line = [&](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += "  ";
        s += cells[i];
        s.append(width[i] - cells[i].size(), ' ');
      }
      while (!s.empty() && s.back() == ' ') s.pop_back();
      out << s << '\n';
    };
    line(header);
    std::vector<std::string> rule;
    for (auto w : width) rule.emplace_back(w, '-');
    line(rule);
    for (const auto& r : rows) line(r);
  }
};

namespace detail {

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline Currency parse_currency(std::string_view s) {
  auto u = upper(s);
  if (u == "EUR") return Currency::EUR;
  if (u == "USD") return Currency::USD;
  throw UsageError("currency must be EUR or USD, got '" + std::string(s) + "'");
}

inline OutputFormat parse_format(std::string_view s) {
  auto l = lower(s);
  if (l == "csv") return OutputFormat::Csv;
  if (l == "table") return OutputFormat::Table;
  throw UsageError("format must be csv or table, got '" + std::string(s) + "'");
}

inline Segment parse_segment(std::string_view s) {
  auto l = lower(s);
  if (l == "consumer") return Segment::Consumer;
  if (l == "business") return Segment::Business;
  throw UsageError("segment must be consumer or business, got '" + std::string(s) + "'");
}

inline SampleGrid parse_grid(std::string_view spec) {
  std::vector<double> parts;
  std::size_t pos = 0;
  while (true) {
    auto colon = spec.find(':', pos);
    auto piece = spec.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos);
    auto v = parse_double(piece);
    if (!v) throw UsageError("malformed grid '" + std::string(spec) + "', expected <from>:<to>:<step>");
    parts.push_back(*v);
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() != 3) throw UsageError("malformed grid '" + std::string(spec) + "', expected <from>:<to>:<step>");
  try {
    return SampleGrid(parts[0], parts[1], parts[2]);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

// Trailing positionals shared by several commands: a grid (either
// "from:to:step" or three separate numbers), a currency and a format, in
// any order.
struct TrailingArgs {
  std::optional<SampleGrid> grid;
  std::optional<Currency> currency;
  std::optional<OutputFormat> format;
};

inline TrailingArgs parse_trailing(const std::vector<std::string>& tokens, bool grid_allowed) {
  TrailingArgs out;
  std::vector<double> numbers;
  for (const auto& tok : tokens) {
    auto u = upper(tok);
    if (u == "EUR" || u == "USD") {
      out.currency = parse_currency(tok);
    } else if (u == "CSV" || u == "TABLE") {
      out.format = parse_format(tok);
    } else if (grid_allowed && tok.find(':') != std::string::npos) {
      out.grid = parse_grid(tok);
    } else if (auto v = parse_double(tok); grid_allowed && v) {
      numbers.push_back(*v);
    } else {
      throw UsageError("unexpected argument '" + tok + "'");
    }
  }
  if (!numbers.empty()) {
    if (numbers.size() != 3 || out.grid) throw UsageError("grid needs exactly <from> <to> <step>");
    try {
      out.grid = SampleGrid(numbers[0], numbers[1], numbers[2]);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace detail

/// Settings shared by every command after argument parsing.
struct Context {
  Catalog catalog;
  Currency currency = Currency::EUR;
  OutputFormat format = OutputFormat::Csv;
  std::ostream& out;
  std::ostream& err;
};

inline const PricingPlan& lookup_plan(const Catalog& catalog, const std::string& id) {
  const auto* plan = catalog.find(id);
  if (!plan) throw LookupError("unknown plan '" + id + "'");
  return *plan;
}

inline int cmd_unit_price(Context& ctx, const std::string& plan_id, const SampleGrid& grid) {
  const auto& plan = lookup_plan(ctx.catalog, plan_id);
  auto points = sample_unit_curve(plan, grid, ctx.currency);
  TextTable table{{"x_gb", "total_price", "unit_price"}, {}};
  for (const auto& pt : points)
    table.rows.push_back({gb(pt.x.value()), fixed4(total_price(plan, pt.x, ctx.currency).amount()),
                          fixed4(pt.p.amount())});
  table.render(ctx.out, ctx.format);
  return kExitOk;
}

inline int cmd_fit(Context& ctx, const std::string& plan_id, const std::optional<SampleGrid>& grid) {
  const auto& plan = lookup_plan(ctx.catalog, plan_id);
  auto points = sample_unit_curve(plan, grid ? *grid : default_grid(plan), ctx.currency);
  auto fit = fit_two_part(points);
  auto normal = normal_equation_residuals(points, fit.fixed_fee, fit.marginal_price);
  if (fit.has_negative_estimate())
    ctx.err << "warning: negative two-part estimate for '" << plan.id << "'\n";
  TextTable table{{"plan", "currency", "f_hat", "v_hat", "rss", "n", "sum_residual", "sum_residual_over_x"}, {}};
  table.rows.push_back({plan.id, std::string(to_string(fit.currency)), fixed4(fit.fixed_fee),
                        fixed4(fit.marginal_price), scientific(fit.rss), std::to_string(fit.n),
                        scientific(normal.sum), scientific(normal.weighted_sum)});
  table.render(ctx.out, ctx.format);
  return kExitOk;
}

inline int cmd_pareto(Context& ctx, Segment segment) {
  std::vector<PlanScore> scores;
  for (const auto& plan : ctx.catalog.plans) {
    if (plan.segment != segment) continue;
    if (const auto* t = std::get_if<TwoPartTariff>(&plan.model))
      scores.emplace_back(plan.id, convert_currency(t->fixed_fee, ctx.currency).amount(),
                          convert_currency(t->marginal, ctx.currency).amount());
  }
  if (scores.empty())
    throw LookupError("no two_part plans in segment " + std::string(to_string(segment)));

  auto report = pareto_frontier(scores);
  auto score_of = [&](const std::string& id) {
    return *std::find_if(scores.begin(), scores.end(), [&](const auto& s) { return s.plan_id == id; });
  };
  TextTable table{{"plan", "f", "v", "status", "dominated_by"}, {}};
  for (const auto& id : report.frontier) {
    auto s = score_of(id);
    table.rows.push_back({id, fixed4(s.fixed_fee), fixed4(s.marginal_price), "frontier", ""});
  }
  for (const auto& d : report.dominated) {
    auto s = score_of(d.plan_id);
    table.rows.push_back({d.plan_id, fixed4(s.fixed_fee), fixed4(s.marginal_price), "dominated",
                          detail::join(d.dominators, ";")});
  }
  table.render(ctx.out, ctx.format);
  return kExitOk;
}

inline int cmd_cheapest(Context& ctx, Segment segment, const SampleGrid& grid, double unit_tie_tol,
                        const std::vector<std::string>& only) {
  std::vector<PricingPlan> plans;
  for (const auto& id : only) {
    const auto& plan = lookup_plan(ctx.catalog, id);
    if (plan.segment != segment)
      throw LookupError("plan '" + id + "' is not in segment " + std::string(to_string(segment)));
  }
  for (const auto& plan : ctx.catalog.plans) {
    if (plan.segment != segment || !is_priceable(plan)) continue;
    if (!only.empty() && std::find(only.begin(), only.end(), plan.id) == only.end()) continue;
    plans.push_back(plan);
  }
  if (plans.empty())
    throw LookupError("no priceable plans in segment " + std::string(to_string(segment)));
  if (!(unit_tie_tol >= 0.0)) throw UsageError("tie tolerance must be non-negative");

  const Money tol(unit_tie_tol, ctx.currency);
  std::vector<std::pair<double, std::vector<std::string>>> points;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.at(i);
    std::vector<std::string> winners;
    try {
      winners = cheapest_per_point(plans, CapacityGB(x), tol, TieBasis::Unit);
    } catch (const NoPlanCoversX&) {
    }
    points.emplace_back(x, std::move(winners));
  }
  TextTable table{{"from_gb", "to_gb", "winners"}, {}};
  for (const auto& b : merge_brackets(points))
    table.rows.push_back({gb(b.from_gb), gb(b.to_gb), b.winners.empty() ? "-" : detail::join(b.winners, ";")});
  table.render(ctx.out, ctx.format);
  return kExitOk;
}

inline int cmd_list(Context& ctx) {
  TextTable table{{"plan", "provider", "segment", "model", "currency", "max_gb", "status"}, {}};
  for (const auto& plan : ctx.catalog.plans) {
    auto cap = max_capacity(plan);
    std::string status = !is_priceable(plan) ? "capacity-only" : !has_unit_price(plan) ? "unlimited" : "priceable";
    table.rows.push_back({plan.id, plan.provider, std::string(to_string(plan.segment)), std::string(model_name(plan.model)),
                          std::string(to_string(plan.currency)), cap ? gb(cap->value()) : "unbounded", status});
  }
  table.render(ctx.out, ctx.format);
  return kExitOk;
}

/// Resolves the catalog path: explicit flag, then environment, then the
/// shipped corpus.
inline std::string resolve_catalog_path(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kCatalogEnv); env && *env) return env;
  return TARIFF_DEFAULT_CATALOG;
}

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cloud storage pricing plans: unit prices, two-part fits, Pareto shortlists", "tariffctl"};
  app.set_version_flag("--version", "tariffctl " + std::string(kVersion));
  app.require_subcommand(1);

  std::optional<std::string> catalog_flag;
  std::string currency_flag, format_flag, plans_flag;
  double tie_tol = kDefaultUnitTieTolerance;
  app.add_option("--catalog", catalog_flag, "Catalog file (default: $TARIFF_CATALOG or the shipped corpus)");
  app.add_option("--currency", currency_flag, "Output currency, EUR or USD (default EUR)");
  app.add_option("--format", format_flag, "Output format, csv or table (default csv)");
  app.add_option("--tie-tol", tie_tol, "Unit-price tie tolerance for cheapest (default 0.001)");
  app.add_option("--plans", plans_flag, "Comma-separated plan ids to restrict cheapest to");

  std::vector<std::string> up_args, fit_args, pareto_args, cheapest_args;
  auto* up = app.add_subcommand("unit-price", "Unit price curve: <plan> <from>:<to>:<step> [currency] [format]");
  up->add_option("args", up_args)->required();
  auto* fit = app.add_subcommand("fit", "Two-part fit: <plan> [<from>:<to>:<step>] [currency] [format]");
  fit->add_option("args", fit_args)->required();
  auto* pareto = app.add_subcommand("pareto", "Pareto frontier of two_part plans: <segment> [format]");
  pareto->add_option("args", pareto_args)->required();
  auto* cheapest =
      app.add_subcommand("cheapest", "Cheapest plan per capacity: <segment> [<from>:<to>:<step>] [currency] [format]");
  cheapest->add_option("args", cheapest_args)->required();
  auto* validate_cmd = app.add_subcommand("validate", "Check the catalog and print diagnostics");
  auto* list = app.add_subcommand("list", "List catalog plans");
  for (auto* sub : {up, fit, pareto, cheapest, validate_cmd, list}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitLookup;
  }

  try {
    std::string path = resolve_catalog_path(catalog_flag);
    auto parsed = load_catalog(path);
    if (validate_cmd->parsed()) {
      std::size_t errors = 0, warnings = 0;
      for (const auto& d : parsed.diagnostics) {
        out << format_diagnostic(d) << '\n';
        (d.severity == Severity::Error ? errors : warnings) += 1;
      }
      std::size_t plans = parsed.catalog ? parsed.catalog->plans.size() : 0;
      out << plans << " plans, " << errors << " errors, " << warnings << " warnings\n";
      return errors ? kExitDomain : kExitOk;
    }
    if (!parsed.catalog) {
      for (const auto& d : parsed.diagnostics)
        if (d.severity == Severity::Error) err << format_diagnostic(d) << '\n';
      err << "catalog '" << path << "' has errors\n";
      return kExitDomain;
    }

    Context ctx{std::move(*parsed.catalog), Currency::EUR, OutputFormat::Csv, out, err};
    auto apply_flags = [&](const detail::TrailingArgs& t) {
      if (t.currency) ctx.currency = *t.currency;
      if (t.format) ctx.format = *t.format;
      if (!currency_flag.empty()) ctx.currency = detail::parse_currency(currency_flag);
      if (!format_flag.empty()) ctx.format = detail::parse_format(format_flag);
    };
    auto split_first = [](const std::vector<std::string>& v) {
      return std::vector<std::string>(v.begin() + 1, v.end());
    };

    if (up->parsed()) {
      auto t = detail::parse_trailing(split_first(up_args), true);
      if (!t.grid) throw UsageError("unit-price needs a grid <from>:<to>:<step>");
      apply_flags(t);
      return cmd_unit_price(ctx, up_args.front(), *t.grid);
    }
    if (fit->parsed()) {
      auto t = detail::parse_trailing(split_first(fit_args), true);
      apply_flags(t);
      return cmd_fit(ctx, fit_args.front(), t.grid);
    }
    if (pareto->parsed()) {
      auto t = detail::parse_trailing(split_first(pareto_args), false);
      apply_flags(t);
      return cmd_pareto(ctx, detail::parse_segment(pareto_args.front()));
    }
    if (cheapest->parsed()) {
      auto t = detail::parse_trailing(split_first(cheapest_args), true);
      apply_flags(t);
      std::vector<std::string> only;
      std::stringstream ss(plans_flag);
      for (std::string id; std::getline(ss, id, ',');)
        if (!id.empty()) only.push_back(id);
      return cmd_cheapest(ctx, detail::parse_segment(cheapest_args.front()),
                          t.grid ? *t.grid : SampleGrid(10, 10000, 10), tie_tol, only);
    }
    apply_flags({});
    return cmd_list(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitLookup;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << '\n';
    return kExitLookup;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitLookup;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace tariff::cli
