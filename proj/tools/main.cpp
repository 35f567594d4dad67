#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "maxorder/analyze.hpp"

using namespace maxorder;

int main(int argc, char** argv) {
  CLI::App app{"certified integral closure of an order over Z"};
  app.require_subcommand(1);

  CLI::App* an = app.add_subcommand("analyze", "run the full closure analysis");
  std::string poly_str, coeffs_str, table_file, format = "text";
  std::string prime_str;
  std::uint64_t seed = 0;
  bool fast = false;
  unsigned long max_enum = 15625;
  auto* opt_poly = an->add_option("--poly", poly_str, "monic integer polynomial in x");
  auto* opt_coeffs =
      an->add_option("--coeffs", coeffs_str, "comma-separated coefficients, low degree first");
  auto* opt_table = an->add_option("--table", table_file, "JSON multiplication-table file");
  an->add_option("--prime", prime_str, "restrict the analysis to one prime");
  an->add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  an->add_option("--seed", seed, "seed for randomized subroutines");
  an->add_flag("--fast", fast, "skip the oracle cross-check of certified results");
  an->add_option("--max-enum", max_enum, "bound for brute-force submodule enumeration");

  CLI11_PARSE(app, argc, argv);

  int given = (opt_poly->count() ? 1 : 0) + (opt_coeffs->count() ? 1 : 0) +
              (opt_table->count() ? 1 : 0);
  if (given != 1) {
    std::cerr << "error: exactly one of --poly, --coeffs, --table must be given\n";
    return 2;
  }

  try {
    TableOrder A = [&] {
      if (opt_poly->count()) return TableOrder::from_poly(parse_poly(poly_str));
      if (opt_coeffs->count()) {
        Poly f;
        std::string cur;
        for (char c : coeffs_str + ",") {
          if (c == ',') {
            if (cur.empty()) throw Error("--coeffs: empty entry");
            f.emplace_back(cur);
            cur.clear();
          } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
          }
        }
        return TableOrder::from_poly(f);
      }
      std::ifstream in(table_file);
      if (!in) throw Error("--table: cannot open file " + table_file);
      nlohmann::json j;
      in >> j;
      return order_from_table_json(j);
    }();

    AnalyzeOptions opts;
    opts.seed = seed;
    opts.fast = fast;
    if (!prime_str.empty()) opts.prime = Int(prime_str);

    std::string echo = opt_poly->count() ? poly_str
                       : opt_coeffs->count() ? "coeffs " + coeffs_str
                                             : "table " + table_file;
    AnalysisReport rep = analyze(A, echo, opts);
    if (format == "json")
      std::cout << report_json(rep).dump(2) << "\n";
    else
      std::cout << report_text(rep);
    return rep.factorization_complete ? 0 : 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
