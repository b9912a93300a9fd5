#include "ensys/cli.hpp"

#include "ensys/census.hpp"
#include "ensys/error.hpp"
#include "ensys/gadgets.hpp"
#include "ensys/json_io.hpp"
#include "ensys/lowering.hpp"
#include "ensys/polynomial.hpp"
#include "ensys/solver.hpp"
#include "ensys/system.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace ensys::cli {

namespace {

using json_io::Json;

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const auto parsed = std::strtoull(v, &end, 10);
  if (*end != '\0') throw std::invalid_argument(std::string(name) + " must be a plain integer, got '" + v + "'");
  return parsed;
}

struct Common {
  std::string domain = "Z";
  std::string format = "json";
  std::uint64_t node_limit = 0;
  unsigned workers = 1;
};

struct Input {
  std::string inline_text;
  std::string path;
  bool from_stdin = false;
};

void add_input(CLI::App* cmd, Input& input, const std::string& inline_flag, const std::string& what) {
  auto* a = cmd->add_option(inline_flag, input.inline_text, what + " given inline");
  auto* b = cmd->add_option("--file", input.path, "read the " + what + " from a file")->check(CLI::ExistingFile);
  auto* c = cmd->add_flag("--stdin", input.from_stdin, "read the " + what + " from standard input");
  a->excludes(b)->excludes(c);
  b->excludes(c);
}

std::string read_input(const Input& input, std::istream& in, const std::string& what) {
  if (!input.inline_text.empty()) return input.inline_text;
  std::stringstream buf;
  if (!input.path.empty()) {
    std::ifstream f(input.path);
    buf << f.rdbuf();
    return buf.str();
  }
  if (input.from_stdin) {
    buf << in.rdbuf();
    return buf.str();
  }
  throw CLI::RequiredError("no " + what + " given (inline, --file or --stdin)");
}

// JSON systems (bare or wrapped in {"system": ...}) and text systems.
EnSystem parse_any_system(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    if (doc.contains("system") && doc["system"].is_object()) return parse_system_json(doc["system"].dump());
    return parse_system_json(text);
  }
  return parse_system(text);
}

ClassifyBudget classify_budget(const Common& c) {
  ClassifyBudget b;
  if (c.node_limit != 0) b.node_limit = c.node_limit;
  return b;
}

void emit_system(std::ostream& out, const EnSystem& sys, const std::string& format) {
  if (format == "text") {
    out << serialize_system(sys, SystemFormat::Text);
    if (!sys.empty()) out << "\n";
  } else {
    out << json_io::system(sys).dump() << "\n";
  }
}

void emit_tuples(std::ostream& out, const std::vector<Tuple>& ts, const std::string& format) {
  if (format == "text") {
    for (const auto& t : ts) {
      out << "(";
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? ", " : "") << t[i].get_str();
      out << ")\n";
    }
  } else {
    out << json_io::tuples(ts).dump() << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build, lower, solve and census systems of x=1, x+y=z, x*y=z equations", "ensys"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  common.node_limit = 0;
  common.workers = 1;
  int status = kOk;

  const auto add_common = [&](CLI::App* cmd, bool domain, bool format) {
    if (domain) {
      cmd->add_option("--domain", common.domain, "Z, N or P")
          ->check(CLI::IsMember({"Z", "N", "P", "integers", "nonnegative", "positive"}, CLI::ignore_case));
    }
    if (format) cmd->add_option("--format", common.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--node-limit", common.node_limit, "search node budget (default from ENSYS_NODE_LIMIT)")
        ->check(CLI::NonNegativeNumber);
  };

  // lower
  auto* lower = app.add_subcommand("lower", "lower a polynomial equation D = 0 to a system");
  Input lower_in;
  add_input(lower, lower_in, "--expr", "polynomial");
  std::optional<std::uint64_t> lower_box;
  bool lower_nonneg = false;
  bool lower_share = false;
  lower->add_option("--box", lower_box, "also report auxiliary bounds for inputs in [-B, B]");
  lower->add_flag("--nonneg", lower_nonneg, "force every input variable to be a sum of four squares");
  lower->add_flag("--share-cells", lower_share, "reuse identical cells");
  add_common(lower, true, false);

  // solve
  auto* solve = app.add_subcommand("solve", "list every solution inside a box");
  Input solve_in;
  add_input(solve, solve_in, "--system", "system");
  std::uint64_t solve_box = 0;
  solve->add_option("--box", solve_box, "box radius")->required();
  add_common(solve, true, true);

  // classify / count
  auto* classify = app.add_subcommand("classify", "decide whether the solution set is finite");
  Input classify_in;
  add_input(classify, classify_in, "--system", "system");
  add_common(classify, true, false);

  auto* count = app.add_subcommand("count", "count solutions of a system with finitely many");
  Input count_in;
  add_input(count, count_in, "--system", "system");
  add_common(count, true, false);

  // census
  auto* census_cmd = app.add_subcommand("census", "compute the height and count maxima over E_n");
  std::size_t census_n = 1;
  std::string census_mode_text;
  std::uint64_t task_limit = 0;
  std::string checkpoint;
  census_cmd->add_option("--n", census_n, "number of variables (1..4)")->required()->check(CLI::Range(1, 4));
  census_cmd->add_option("--mode", census_mode_text, "full, pruned or witness")
      ->check(CLI::IsMember({"full", "pruned", "witness"}));
  census_cmd->add_option("--task-node-limit", task_limit, "nodes per task before it is cut short (0 = none)");
  census_cmd->add_option("--checkpoint", checkpoint, "resumable progress file");
  census_cmd->add_option("--workers", common.workers, "worker threads (default from ENSYS_WORKERS)")
      ->check(CLI::PositiveNumber);
  add_common(census_cmd, true, false);

  // gadget
  auto* gadget = app.add_subcommand("gadget", "emit a gadget system or value");
  std::string gadget_kind;
  std::string gadget_arg;
  Input gadget_in;
  // The short numbered names are kept as accepted aliases.
  const std::map<std::string, std::string> gadget_names = {
      {"hypercube", "hypercube"}, {"fchain", "fchain"},        {"pinned", "pinned"},
      {"thm2", "pinned"},         {"threshold", "threshold"},  {"thm3", "threshold"},
      {"square-split", "square-split"}, {"lemma1", "square-split"}, {"foursquare", "foursquare"}};
  gadget->add_option("kind", gadget_kind, "hypercube, fchain, pinned, threshold, square-split, foursquare")
      ->required()
      ->transform(CLI::Transformer(gadget_names))
      ->option_text("KIND");
  gadget->add_option("arg", gadget_arg, "n for hypercube/fchain, u for threshold, m for foursquare");
  gadget->add_option("--system", gadget_in.inline_text, "phi for pinned/threshold, or the polynomial for square-split");
  gadget->add_option("--file", gadget_in.path, "read phi or the polynomial from a file")->check(CLI::ExistingFile);
  gadget->add_flag("--stdin", gadget_in.from_stdin, "read phi or the polynomial from standard input");
  add_common(gadget, false, true);

  // check
  auto* check = app.add_subcommand("check", "run a property recipe");
  std::string check_kind;
  Input check_in;
  std::vector<std::uint64_t> check_boxes = {2, 3, 5};
  std::size_t check_levels = 4;
  const std::map<std::string, std::string> check_names = {{"squaring", "squaring"},
                                                           {"lemma3", "squaring"},
                                                           {"count-preservation", "count-preservation"},
                                                           {"gadget-bound", "gadget-bound"}};
  check->add_option("recipe", check_kind, "squaring, count-preservation, gadget-bound")
      ->required()
      ->transform(CLI::Transformer(check_names))
      ->option_text("RECIPE");
  check->add_option("--expr", check_in.inline_text, "polynomial for count-preservation and gadget-bound");
  check->add_option("--file", check_in.path, "read the polynomial from a file")->check(CLI::ExistingFile);
  check->add_flag("--stdin", check_in.from_stdin, "read the polynomial from standard input");
  check->add_option("--box", check_boxes, "box radii for count-preservation");
  check->add_option("--levels", check_levels, "highest level for the squaring chain")->check(CLI::Range(2, 6));
  bool check_share = false;
  check->add_flag("--share-cells", check_share, "lower with shared cells");
  add_common(check, true, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    common.node_limit = env_or("ENSYS_NODE_LIMIT", 0);
    common.workers = static_cast<unsigned>(std::max<std::uint64_t>(1, env_or("ENSYS_WORKERS", 1)));
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const Domain domain = parse_domain(common.domain);
    const ClassifyBudget budget = classify_budget(common);
    SearchBudget search;
    if (common.node_limit != 0) search.node_limit = common.node_limit;

    if (*lower) {
      const Polynomial d = parse_polynomial(read_input(lower_in, in, "polynomial"));
      LoweringOptions opts = lowering_options_for(domain);
      opts.share_cells = lower_share;
      const LoweringResult lr = lower_polynomial(d, opts);
      EnSystem sys = lr.system;
      if (lower_nonneg) sys = encode_nonneg(sys, lr.input_positions);
      Json doc;
      doc["system"] = json_io::system(sys);
      doc["input_positions"] = lr.input_positions;
      if (lower_box) {
        Json bounds = Json::array();
        for (const auto& b : aux_box(lr, Integer(static_cast<unsigned long>(*lower_box)))) bounds.push_back(json_io::integer(b));
        doc["aux_bounds"] = std::move(bounds);
      }
      out << doc.dump() << "\n";
    } else if (*solve) {
      const EnSystem sys = parse_any_system(read_input(solve_in, in, "system"));
      const auto sols = enumerate_solutions(sys, domain, Box::uniform(sys.n(), Integer(static_cast<unsigned long>(solve_box)), domain), search);
      emit_tuples(out, sols.tuples, common.format);
    } else if (*classify) {
      const EnSystem sys = parse_any_system(read_input(classify_in, in, "system"));
      const auto v = classify_finiteness(sys, domain, budget);
      out << json_io::verdict(v).dump() << "\n";
      if (v.kind == FinitenessVerdict::Kind::Undetermined) status = kUndetermined;
    } else if (*count) {
      const EnSystem sys = parse_any_system(read_input(count_in, in, "system"));
      const auto c = count_solutions(sys, domain, budget);
      Json doc;
      doc["verdict"] = std::string(verdict_name(c.kind));
      if (c.kind == FinitenessVerdict::Kind::Finite) doc["count"] = json_io::integer(c.count);
      out << doc.dump() << "\n";
      if (c.kind == FinitenessVerdict::Kind::Undetermined) status = kUndetermined;
    } else if (*census_cmd) {
      CensusOptions opts;
      opts.budget = budget;
      opts.workers = common.workers;
      opts.checkpoint_path = checkpoint;
      if (!census_mode_text.empty()) {
        opts.mode = parse_census_mode(census_mode_text);
      } else {
        opts.mode = census_n <= 2 ? CensusMode::Full : census_n == 3 ? CensusMode::Pruned : CensusMode::Witness;
      }
      opts.task_node_limit = task_limit;
      const auto rec = census(census_n, domain, opts);
      out << census_record_json(rec);
      if (rec.partial || rec.undetermined != 0) status = kUndetermined;
    } else if (*gadget) {
      const auto numeric_arg = [&](const char* what) {
        if (gadget_arg.empty()) throw CLI::RequiredError(std::string("gadget ") + gadget_kind + " needs " + what);
        return std::stoull(gadget_arg);
      };
      if (gadget_kind == "hypercube") {
        emit_system(out, hypercube_system(numeric_arg("n")), common.format);
      } else if (gadget_kind == "fchain") {
        emit_system(out, height_witness_chain(numeric_arg("n")), common.format);
      } else if (gadget_kind == "pinned") {
        emit_system(out, pinned_argument_system(parse_any_system(read_input(gadget_in, in, "phi system"))), common.format);
      } else if (gadget_kind == "threshold") {
        const auto u = numeric_arg("u");
        emit_system(out, threshold_argument_system(u, parse_any_system(read_input(gadget_in, in, "phi system"))),
                    common.format);
      } else if (gadget_kind == "square-split") {
        const auto g = square_split_gadget(parse_polynomial(read_input(gadget_in, in, "polynomial")));
        if (common.format == "text") {
          out << g.to_string() << "\n";
        } else {
          Json doc;
          doc["polynomial"] = g.to_string();
          doc["var_count"] = g.var_count();
          out << doc.dump() << "\n";
        }
      } else {
        Integer m;
        if (gadget_arg.empty() || m.set_str(gadget_arg, 10) != 0) throw CLI::RequiredError("gadget foursquare needs m");
        const auto parts = four_square_decompose(m);
        Json arr = Json::array();
        for (const auto& p : parts) arr.push_back(json_io::integer(p));
        out << arr.dump() << "\n";
      }
    } else if (*check) {
      Json report;
      bool ok = true;
      if (check_kind == "squaring") {
        const auto steps = square_extension_chain(height_witness_chain(2), check_levels - 1, domain, budget);
        Json rows = Json::array();
        for (const auto& s : steps) {
          Json row;
          row["n"] = s.n;
          row["base_height"] = json_io::integer(s.base_height);
          row["extended_height"] = s.extended_height ? json_io::integer(*s.extended_height) : Json(nullptr);
          row["holds"] = s.holds;
          ok = ok && s.holds;
          rows.push_back(std::move(row));
        }
        ok = ok && steps.size() + 1 == check_levels;
        report["steps"] = std::move(rows);
      } else if (check_kind == "count-preservation") {
        const Polynomial d = parse_polynomial(read_input(check_in, in, "polynomial"));
        LoweringOptions opts = lowering_options_for(domain);
        opts.share_cells = check_share;
        Json rows = Json::array();
        for (auto b : check_boxes) {
          const auto r = lowering_round_trip(d, domain, Integer(static_cast<unsigned long>(b)), opts, search);
          Json row;
          row["box"] = b;
          row["zeros"] = r.zeros;
          row["system_solutions"] = r.system_solutions;
          row["unique_extension"] = r.unique_extension;
          row["ok"] = r.ok();
          ok = ok && r.ok();
          rows.push_back(std::move(row));
        }
        report["boxes"] = std::move(rows);
      } else {
        const Polynomial d = parse_polynomial(read_input(check_in, in, "polynomial"));
        const auto hb = height_bound_via_count(d);
        switch (hb.kind) {
          case HeightBound::Kind::Bound: report["result"] = "bound"; break;
          case HeightBound::Kind::EmptyZeroSet: report["result"] = "empty"; break;
          case HeightBound::Kind::Undetermined: report["result"] = "undetermined"; break;
        }
        report["max_height"] = json_io::integer(hb.max_height);
        report["gadget_count"] = json_io::integer(hb.gadget_count);
        report["stable_radius"] = json_io::integer(hb.stable_radius);
        report["zeros"] = json_io::tuples(hb.zeros);
        if (hb.kind == HeightBound::Kind::Undetermined) status = kUndetermined;
        ok = hb.kind != HeightBound::Kind::Bound || hb.gadget_count > hb.max_height;
      }
      report["ok"] = ok;
      out << report.dump() << "\n";
      if (!ok && status == kOk) status = kCheckFailed;
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kUndetermined;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: number out of range: " << e.what() << "\n";
    return kUsage;
  }
  return status;
}

}  // namespace ensys::cli
