#include "tgp/cli.hpp"

#include <CLI11.hpp>
#include <ostream>

#include "tgp/errors.hpp"
#include "tgp/report.hpp"

namespace tgp {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool plot = false;
};

int execute(StudySpec spec, const Options& opts, std::ostream& out) {
  if (opts.seed) spec.seed = *opts.seed;
  if (opts.threads) spec.threads = *opts.threads;
  spec.plot = spec.plot || opts.plot;
  std::string target = !opts.out.empty() ? opts.out : spec.output;
  if (target.empty()) target = study_tag(spec.kind) + ".csv";
  const auto csv = output_path(target);
  const auto jsonl = sibling(csv, ".jsonl");

  std::vector<OutputRecord> records;
  switch (spec.kind) {
    case StudyKind::Simulate: {
      auto r = run_simulate(spec);
      write_trajectory_csv(csv, r.trajectory);
      out << "fitted rate " << format_number(r.trajectory.fitted_rate()) << ", abscissa "
          << format_number(r.record.results["abscissa"].get<double>()) << '\n';
      records.push_back(std::move(r.record));
      break;
    }
    case StudyKind::Spectrum: {
      auto r = run_spectrum(spec);
      write_spectrum_csv(csv, r.spectrum);
      out << r.spectrum.eigenvalues.size() << " eigenvalues, abscissa " << format_number(r.spectrum.abscissa) << '\n';
      records.push_back(std::move(r.record));
      break;
    }
    case StudyKind::Resolvent: {
      auto r = run_resolvent(spec);
      write_scan_csv(csv, r.scan);
      out << r.scan.lambdas.size() << " samples, sup norm " << format_number(r.scan.sup_norm) << " at lambda "
          << format_number(r.scan.argmax) << '\n';
      records.push_back(std::move(r.record));
      break;
    }
    case StudyKind::Sweep: {
      auto r = run_parameter_sweep(spec);
      write_sweep_csv(csv, r);
      double worst = -std::numeric_limits<double>::infinity();
      for (double a : r.abscissas) worst = std::max(worst, a);
      out << r.records.size() << " records, largest abscissa " << format_number(worst) << '\n';
      records = std::move(r.records);
      break;
    }
    case StudyKind::Combo: {
      auto r = run_combination_matrix(spec);
      write_combo_csv(csv, r);
      write_combo_table(csv.parent_path() / (csv.stem().string() + "_table.csv"), r);
      out << r.records.size() << " combinations\n";
      records = std::move(r.records);
      break;
    }
    case StudyKind::CattaneoEquivalence: {
      auto r = run_cattaneo_equivalence(spec);
      write_cattaneo_csv(csv, r);
      for (std::size_t b = 0; b < r.bcs.size(); ++b) {
        out << bcs_tag(r.bcs[b]) << ": mismatch " << format_number(r.mismatch[b]) << '\n';
      }
      records = std::move(r.records);
      break;
    }
    case StudyKind::SingularLimit: {
      auto r = run_singular_limit(spec);
      write_limit_csv(csv, r);
      out << "final distance " << format_number(r.distance.back()) << (r.converged ? ", converged" : ", not converged")
          << '\n';
      records = std::move(r.records);
      break;
    }
  }
  write_records(jsonl, records);
  if (spec.plot) write_gnuplot(csv, study_tag(spec.kind));

  const auto failures = std::count_if(records.begin(), records.end(), [](const OutputRecord& r) { return r.failure; });
  out << "wrote " << csv.string() << " and " << jsonl.string() << '\n';
  if (failures > 0) {
    out << failures << " FAILURE record(s)\n";
    return kExitFailureRecords;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for thermoelastic Timoshenko beams with thermal memory", "tgp"};
  app.set_version_flag("--version", std::string(TGP_VERSION));
  app.require_subcommand(1);
  Options opts;
  for (auto kind : {StudyKind::Simulate, StudyKind::Spectrum, StudyKind::Resolvent, StudyKind::Sweep, StudyKind::Combo,
                    StudyKind::CattaneoEquivalence, StudyKind::SingularLimit}) {
    auto* sub = app.add_subcommand(study_tag(kind), "Run the " + study_tag(kind) + " study");
    sub->add_option("--config", opts.config, "Configuration file")->required();
    sub->add_option("--out", opts.out, "Output CSV path (records go to the .jsonl sibling)");
    sub->add_option("--seed", opts.seed, "Seed for parameter draws and random initial data");
    sub->add_option("--threads", opts.threads, "Worker threads (0 = all cores)");
    sub->add_flag("--plot", opts.plot, "Also write a gnuplot script");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << TGP_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "tgp: " << e.what() << '\n';
    return kExitConfigError;
  }

  const auto* chosen = app.get_subcommands().front();
  try {
    StudySpec spec = load_study(opts.config);
    spec.kind = parse_study_tag(chosen->get_name());
    return execute(std::move(spec), opts, out);
  } catch (const ConfigError& e) {
    err << "tgp: config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "tgp: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "tgp: invalid input: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    err << "tgp: invalid input: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "tgp: error: " << e.what() << '\n';
    return kExitInternalError;
  }
}

}  // namespace tgp
