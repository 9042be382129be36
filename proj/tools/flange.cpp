// flange: command-line access to the duality toolkit for multiparameter
// persistence modules.  Subcommands expose Matlis duality, injective
// hulls, flat covers, minimal resolutions, flange presentations,
// single-parameter barcodes, corner multiplicity tables, module
// validation, and a deterministic random generator.
//
// Inputs are grid JSON (sniffed by a leading '{') or presentation text.
// Reports are JSON on stdout or --output.  Exit codes: 0 success,
// 1 verification failure, 2 parse/usage error, 3 internal failure.
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flange/flange.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace flange;

/// One processed input: the report plus the worst exit code it implies.
struct Outcome {
  json report;
  int code = 0;
};

/// Classified failure while handling one input.
struct CliFailure {
  int code;
  std::string type;
  std::string message;
};

json face_json(const Face& face, int n) { return json(face.axes_one_based(n)); }

json degree_json(const Degree& d) { return json(d.c); }

json summands_json(const std::vector<Summand>& summands, int n) {
  json out = json::array();
  for (const Summand& s : summands) {
    json item;
    item["kind"] = to_string(s.kind);
    item["degree"] = degree_json(s.degree);
    item["face"] = face_json(s.face, n);
    out.push_back(std::move(item));
  }
  return out;
}

json envelope_json(const EnvelopeReport& rep, int n, const char* arrow_name) {
  json out;
  out[arrow_name] = rep.arrow_ok;
  out["faces"] = json::array();
  for (const FaceCheck& f : rep.faces) {
    json item;
    item["face"] = face_json(f.face, n);
    item["ok"] = f.ok;
    out["faces"].push_back(std::move(item));
  }
  out["passed"] = rep.passed();
  return out;
}

json table_json(const MultTable& table, int n) {
  json out = json::array();
  for (const auto& [key, mult] : table.entries()) {
    json item;
    item["face"] = face_json(key.first, n);
    item["degree"] = degree_json(key.second);
    item["mult"] = mult;
    out.push_back(std::move(item));
  }
  return out;
}

json module_json(const GridModule& m) { return json::parse(serialize_grid(m)); }

std::string read_source(const std::string& path) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure{2, "io", "cannot open input file: " + path};
    buffer << in.rdbuf();
  }
  return buffer.str();
}

/// Sniff the format (grid JSON starts with '{') and produce a module.
GridModule load_module(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_grid(text);
  return realize_presentation(parse_presentation(text));
}

/// Commands that compute on a module refuse one whose grid does not
/// commute; only `verify` reports that condition instead.
void require_valid(const GridModule& m) {
  if (!validate(m).ok())
    throw CliFailure{2, "invalid module", "input module fails validation; run `flange verify`"};
}

Outcome run_dual(const GridModule& m) { return {module_json(matlis_dual(m)), 0}; }

Outcome run_hull(const GridModule& m) {
  HullResult h = injective_hull(m);
  EnvelopeReport rep = verify_injective_hull(h.embedding);
  json out;
  out["summands"] = summands_json(h.hull.summands, m.n());
  out["verification"] = envelope_json(rep, m.n(), "mono");
  return {std::move(out), rep.passed() ? 0 : 1};
}

Outcome run_cover(const GridModule& m) {
  CoverResult c = flat_cover(m);
  EnvelopeReport rep = verify_flat_cover(c.projection);
  json out;
  out["summands"] = summands_json(c.cover.summands, m.n());
  out["verification"] = envelope_json(rep, m.n(), "epi");
  return {std::move(out), rep.passed() ? 0 : 1};
}

Outcome run_resolution(const GridModule& m, ResolutionKind kind) {
  Resolution res = kind == ResolutionKind::injective ? minimal_injective_resolution(m)
                                                     : minimal_flat_resolution(m);
  ResolutionReport rep = verify_minimal_resolution(res);
  json out;
  out["kind"] = kind == ResolutionKind::injective ? "injective" : "flat";
  out["length"] = res.length();
  out["terms"] = json::array();
  for (const DecomposedModule& term : res.terms)
    out["terms"].push_back(summands_json(term.summands, m.n()));
  json ver;
  ver["augmentation"] = rep.augmentation_ok;
  ver["complex"] = rep.complex_ok;
  ver["exact"] = rep.exact_ok;
  ver["length"] = rep.length_ok;
  ver["minimality"] = json::array();
  for (const ResolutionReport::MinimalityCheck& c : rep.minimality) {
    json item;
    item["differential"] = c.differential;
    item["face"] = face_json(c.face, m.n());
    item["vanishes"] = c.vanishes;
    ver["minimality"].push_back(std::move(item));
  }
  ver["passed"] = rep.passed();
  out["verification"] = std::move(ver);
  return {std::move(out), rep.passed() ? 0 : 1};
}

Outcome run_flange(const GridModule& m) {
  FlangePresentation fp = flange_presentation(m);
  EnvelopeReport cover_rep = verify_flat_cover(fp.cover.projection);
  EnvelopeReport hull_rep = verify_injective_hull(fp.hull.embedding);
  json out;
  out["cover_summands"] = summands_json(fp.cover.cover.summands, m.n());
  out["hull_summands"] = summands_json(fp.hull.hull.summands, m.n());
  json ver;
  ver["cover"] = envelope_json(cover_rep, m.n(), "epi");
  ver["hull"] = envelope_json(hull_rep, m.n(), "mono");
  bool passed = cover_rep.passed() && hull_rep.passed();
  ver["passed"] = passed;
  out["verification"] = std::move(ver);
  return {std::move(out), passed ? 0 : 1};
}

Outcome run_barcode(const GridModule& m, int pad) {
  Barcode code = barcode_1d(m, pad);
  json bars = json::array();
  for (const auto& [bar, mult] : code.bars) {
    json item;
    item["left"] = bar.left ? json(*bar.left) : json(nullptr);
    item["right"] = bar.right ? json(*bar.right) : json(nullptr);
    item["mult"] = mult;
    bars.push_back(std::move(item));
  }
  json out;
  out["bars"] = std::move(bars);
  return {std::move(out), 0};
}

Outcome run_table(const GridModule& m, int pad, bool socle) {
  json out;
  out["table"] = table_json(socle ? soc_table(m, pad) : top_table(m, pad), m.n());
  return {std::move(out), 0};
}

Outcome run_verify(const GridModule& m) {
  ValidationReport rep = validate(m);
  json out;
  out["ok"] = rep.ok();
  out["violations"] = json::array();
  for (const Violation& v : rep.violations) {
    json item;
    item["at"] = degree_json(v.at);
    item["axes"] = json::array({v.axis_a, v.axis_b});
    item["what"] = v.what;
    out["violations"].push_back(std::move(item));
  }
  return {std::move(out), rep.ok() ? 0 : 1};
}

Outcome process_input(const std::string& command, const std::string& path, int pad) {
  GridModule m = load_module(read_source(path));
  if (command == "verify") return run_verify(m);
  require_valid(m);
  if (command == "dual") return run_dual(m);
  if (command == "hull") return run_hull(m);
  if (command == "cover") return run_cover(m);
  if (command == "injres") return run_resolution(m, ResolutionKind::injective);
  if (command == "flatres") return run_resolution(m, ResolutionKind::flat);
  if (command == "flange") return run_flange(m);
  if (command == "barcode") return run_barcode(m, pad);
  if (command == "soc") return run_table(m, pad, true);
  if (command == "top") return run_table(m, pad, false);
  throw CliFailure{3, "internal", "unhandled command: " + command};
}

/// Map an exception from one input to a failure record.
CliFailure classify(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const CliFailure& f) {
    return f;
  } catch (const ParseError& e) {
    return {2, "parse", e.what()};
  } catch (const DegreeViolation& e) {
    return {2, "degree violation", e.what()};
  } catch (const WrongDimension& e) {
    return {2, "usage", e.what()};
  } catch (const Error& e) {
    return {3, "internal", e.what()};
  } catch (const std::exception& e) {
    return {3, "internal", e.what()};
  }
}

void write_output(const std::string& target, const std::string& text) {
  if (target == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw CliFailure{2, "io", "cannot open output file: " + target};
  out << text << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact duality toolkit for multiparameter persistence modules"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string output = "-";
  int box_pad = 1;
  int jobs = 1;

  std::int64_t gen_field = 2;
  std::uint64_t gen_seed = 0;
  int gen_n = 2;
  int gen_box_width = 3;
  int gen_max_dim = 3;
  std::string gen_kind = "interval_sum";

  const std::vector<std::pair<std::string, std::string>> module_commands = {
      {"dual", "Matlis dual of a module, as grid JSON"},
      {"hull", "injective hull: summands plus per-face socle verdicts"},
      {"cover", "flat cover: summands plus per-face top verdicts"},
      {"injres", "minimal injective resolution with verification"},
      {"flatres", "minimal flat resolution with verification"},
      {"flange", "flat cover and injective hull of the same module"},
      {"barcode", "single-parameter interval decomposition"},
      {"soc", "socle multiplicity table over all faces"},
      {"top", "top multiplicity table over all faces"},
      {"verify", "check that the module's grid commutes"},
  };
  for (const auto& [name, help] : module_commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-i,--input", inputs,
                    "input file(s): grid JSON or presentation text; '-' reads stdin")
        ->required();
    sub->add_option("-o,--output", output, "report destination, '-' for stdout");
    sub->add_option("--box-pad", box_pad, "padding for corner tables and barcodes")
        ->check(CLI::Range(1, 8));
    sub->add_option("-j,--jobs", jobs, "process inputs in parallel")->check(CLI::Range(1, 64));
  }

  CLI::App* gen = app.add_subcommand("gen", "emit a deterministic random module as grid JSON");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--field", gen_field, "field characteristic (0 or a prime)");
  gen->add_option("-n", gen_n, "number of parameters")->check(CLI::Range(1, 8));
  gen->add_option("--box-width", gen_box_width, "box width per axis")->check(CLI::Range(2, 16));
  gen->add_option("--max-dim", gen_max_dim, "pointwise dimension cap")->check(CLI::Range(1, 16));
  gen->add_option("--kind", gen_kind, "interval_sum, presentation, or dual")
      ->check(CLI::IsMember({"interval_sum", "presentation", "dual"}));
  gen->add_option("-o,--output", output, "report destination, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (command == "gen") {
      GenParams params;
      params.n = gen_n;
      params.box_width = gen_box_width;
      params.max_dim = gen_max_dim;
      params.seed = gen_seed;
      params.kind = *gen_kind_from_string(gen_kind);
      try {
        params.field = FieldSpec(gen_field);
      } catch (const Error& e) {
        throw CliFailure{2, "usage", e.what()};
      }
      write_output(output, module_json(random_module(params)).dump());
      return 0;
    }

    // Process the inputs, possibly in parallel; reports keep input order.
    std::vector<Outcome> outcomes(inputs.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
      for (std::size_t i = cursor.fetch_add(1); i < inputs.size(); i = cursor.fetch_add(1)) {
        try {
          outcomes[i] = process_input(command, inputs[i], box_pad);
        } catch (...) {
          CliFailure f = classify(std::current_exception());
          json report;
          report["error"] = json{{"type", f.type}, {"message", f.message}};
          outcomes[i] = Outcome{std::move(report), f.code};
        }
      }
    };
    std::size_t thread_count = std::min<std::size_t>(jobs, inputs.size());
    if (thread_count <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }

    int worst = 0;
    for (const Outcome& o : outcomes) worst = std::max(worst, o.code);

    std::string text;
    if (inputs.size() == 1) {
      text = outcomes[0].report.dump();
    } else {
      json all = json::array();
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        json entry;
        entry["input"] = inputs[i];
        for (auto& [key, value] : outcomes[i].report.items()) entry[key] = value;
        all.push_back(std::move(entry));
      }
      text = all.dump();
    }
    write_output(output, text);
    return worst;
  } catch (const CliFailure& f) {
    std::cerr << "flange: " << f.type << ": " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "flange: internal: " << e.what() << "\n";
    return 3;
  }
}
