// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/cli.hpp"

#include "fermiqi/io.hpp"
#include "fermiqi/qubit_map.hpp"
#include "fermiqi/reductions.hpp"
#include "fermiqi/ssr.hpp"
#include "fermiqi/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>

namespace fermiqi {

namespace {

enum class Format { Text, Json, Csv };

Format parse_format(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    return Format::Text;
}

// Usage errors detected after CLI11 parsing; mapped to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string full(double v) { return format_number(v, 17); }
std::string brief(double v) { return format_number(v, 12); }

std::string join_numbers(const std::vector<double>& v, const char* sep, std::string (*fmt)(double)) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += fmt(v[i]);
    }
    return s;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string complex_text(Complex z) {
    std::string s = brief(z.real());
    s += z.imag() < 0 ? " - " : " + ";
    s += brief(std::abs(z.imag())) + "i";
    return s;
}

std::string witness_text(const PhaseConstraintSystem& sys, const intlin::IntVector& u) {
    std::string s;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0) continue;
        const auto mag = u[i] < 0 ? -u[i] : u[i];
        if (s.empty()) {
            if (u[i] < 0) s += "-";
        } else {
            s += u[i] < 0 ? " - " : " + ";
        }
        if (mag != 1) s += std::to_string(mag);
        s += "(" + sys.rows[i].label + ")";
    }
    return s.empty() ? "none" : s;
}

FermionicState load_state(const std::string& path, int cap, std::ostream& err) {
    StateFile f = read_state_file(path, cap);
    if (f.state.is_zero()) throw ParseError("state in " + path + " has no nonzero amplitude");
    if (!f.state.is_normalized(kNormalizationTolerance)) {
        err << "note: normalising the state read from " << path << "\n";
        return f.state.normalized();
    }
    return std::move(f.state);
}

FermionicState alpha_state(const std::string& text) {
    const std::vector<Complex> alpha = parse_complex_list(text);
    if (alpha.size() != 8) {
        throw ParseError("--alpha needs 8 coefficients (a0, a12, a13, a14, a23, a24, a34, a1234), got " +
                         std::to_string(alpha.size()));
    }
    const FermionicState psi = even_four_mode_state(alpha);
    if (psi.is_zero()) throw ParseError("--alpha coefficients are all zero");
    return psi.normalized();
}

FermionicState generic_alpha_state() {
    std::vector<Complex> alpha;
    for (int k = 0; k < 8; ++k) alpha.emplace_back(1.0, static_cast<double>(k));
    return even_four_mode_state(alpha).normalized();
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// reduce ------------------------------------------------------------------

struct ReduceArgs {
    std::string state;
    std::string trace;
    std::string keep;
    std::string out;
};

int cmd_reduce(const ReduceArgs& a, bool has_trace, bool has_keep, Format fmt, int cap, std::ostream& out,
               std::ostream& err) {
    if (has_trace == has_keep) throw UsageError("reduce needs exactly one of --trace or --keep");
    const FermionicState psi = load_state(a.state, cap, err);
    const int n = psi.modes();
    std::vector<int> kept;
    std::vector<int> traced;
    if (has_trace) {
        traced = parse_mode_list(a.trace, n);
        for (int k = 1; k <= n; ++k) {
            if (!std::binary_search(traced.begin(), traced.end(), k)) kept.push_back(k);
        }
    } else {
        kept = parse_mode_list(a.keep, n);
        for (int k = 1; k <= n; ++k) {
            if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);
        }
    }

    DensityOperator rho;
    if (kept.empty()) {
        // Tracing every mode leaves the trace itself as a 1 x 1 matrix.
        rho.mat = Eigen::MatrixXcd::Constant(1, 1, Complex(psi.amplitudes().squaredNorm(), 0.0));
    } else {
        rho = reduce_pure(psi, kept);
    }
    const Spectrum spec = spectrum(rho.mat);
    const double entropy = entropy_of(spec);
    if (!a.out.empty()) write_density_file(a.out, rho);

    switch (fmt) {
        case Format::Json: {
            Json j;
            j["modes"] = n;
            j["kept"] = kept;
            j["traced"] = traced;
            j["density"] = density_to_json(rho);
            j["spectrum"] = spec.eigenvalues;
            j["entropy"] = entropy;
            emit(out, j);
            break;
        }
        case Format::Csv:
            out << "quantity,row,col,re,im\n";
            for (Eigen::Index r = 0; r < rho.mat.rows(); ++r) {
                for (Eigen::Index c = 0; c < rho.mat.cols(); ++c) {
                    out << "matrix," << r << ',' << c << ',' << full(rho.mat(r, c).real()) << ','
                        << full(rho.mat(r, c).imag()) << "\n";
                }
            }
            for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
                out << "eigenvalue," << i << ",," << full(spec.eigenvalues[i]) << ",0\n";
            }
            out << "entropy,,," << full(entropy) << ",0\n";
            break;
        case Format::Text:
            out << "kept modes:   " << (kept.empty() ? "none" : join_ints(kept)) << "\n";
            out << "traced modes: " << (traced.empty() ? "none" : join_ints(traced)) << "\n";
            out << "reduced density matrix (Fock basis, mode " << (kept.empty() ? 0 : kept.front())
                << " in the lowest bit):\n";
            for (Eigen::Index r = 0; r < rho.mat.rows(); ++r) {
                out << "  ";
                for (Eigen::Index c = 0; c < rho.mat.cols(); ++c) {
                    out << (c ? "   " : "") << complex_text(rho.mat(r, c));
                }
                out << "\n";
            }
            out << "spectrum: " << join_numbers(spec.eigenvalues, ", ", brief) << "\n";
            out << "entropy:  " << brief(entropy) << " nats\n";
            if (!a.out.empty()) out << "wrote " << a.out << "\n";
            break;
    }
    return kExitOk;
}

// analyze -----------------------------------------------------------------

int cmd_analyze(const std::string& path, const std::vector<std::string>& cut_specs, Format fmt, int cap,
                std::ostream& out, std::ostream& err) {
    const FermionicState psi = load_state(path, cap, err);
    std::vector<ModePartition> cuts;
    for (const std::string& c : cut_specs) cuts.push_back(parse_cut(c, psi.modes()));
    if (cuts.empty()) {
        if (psi.modes() < 2) throw UsageError("analyze needs at least two modes");
        cuts = all_bipartitions(psi.modes());
    }
    std::vector<CutAnalysis> results;
    for (const ModePartition& c : cuts) results.push_back(analyze_cut(psi, c));
    const std::string id = std::filesystem::path(path).stem().string();

    switch (fmt) {
        case Format::Json: {
            Json j;
            j["state_id"] = id;
            j["modes"] = psi.modes();
            j["parity"] = to_string(parity_check(psi));
            Json arr = Json::array();
            for (const CutAnalysis& r : results) arr.push_back(cut_analysis_to_json(r));
            j["cuts"] = std::move(arr);
            emit(out, j);
            break;
        }
        case Format::Csv:
            out << "state_id,cut,spec_A,spec_B,mismatch,entropy_A,entropy_B,mutual_info,parity\n";
            for (const CutAnalysis& r : results) {
                out << csv_field(id) << ',' << csv_field(r.cut.label()) << ','
                    << join_numbers(r.spectrum_kept.eigenvalues, ";", full) << ','
                    << join_numbers(r.spectrum_traced.eigenvalues, ";", full) << ',' << full(r.mismatch) << ','
                    << full(r.entropy_kept) << ',' << full(r.entropy_traced) << ',' << full(r.mutual_information)
                    << ',' << to_string(r.parity) << "\n";
            }
            break;
        case Format::Text:
            out << "state:  " << path << " (" << psi.modes() << " modes)\n";
            out << "parity: " << to_string(parity_check(psi)) << "\n";
            for (const CutAnalysis& r : results) {
                out << "\ncut " << r.cut.label() << "\n";
                out << "  spectrum A:         " << join_numbers(r.spectrum_kept.eigenvalues, ", ", brief) << "\n";
                out << "  spectrum B:         " << join_numbers(r.spectrum_traced.eigenvalues, ", ", brief) << "\n";
                out << "  spectral mismatch:  " << brief(r.mismatch) << "\n";
                out << "  entropy A:          " << brief(r.entropy_kept) << "\n";
                out << "  entropy B:          " << brief(r.entropy_traced) << "\n";
                out << "  mutual information: " << brief(r.mutual_information) << "\n";
            }
            break;
    }
    return kExitOk;
}

// verify / counterexample -------------------------------------------------

struct CampaignArgs {
    int modes = 4;
    int trials = 200;
    std::uint64_t seed = 0;
    std::string sector = "even";
    double tol = 1e-9;
    unsigned threads = 0;
    std::string out;
    std::string csv;
};

CampaignConfig make_config(const CampaignArgs& a, int cap) {
    if (a.modes > cap) {
        throw UsageError("--modes " + std::to_string(a.modes) + " exceeds the cap of " + std::to_string(cap) +
                         " (set FERMI_MAX_MODES to raise it)");
    }
    CampaignConfig cfg;
    cfg.n = a.modes;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.tolerance = a.tol;
    cfg.threads = a.threads;
    try {
        cfg.sector = parse_sector(a.sector);
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

std::string trials_csv(const std::vector<TrialResult>& rows) {
    std::ostringstream os;
    os << "trial,max_mismatch,worst_cut\n";
    for (const TrialResult& t : rows) os << t.trial << ',' << full(t.max_mismatch) << ',' << csv_field(t.worst_cut) << "\n";
    return os.str();
}

int cmd_verify(const CampaignArgs& a, Format fmt, int cap, std::ostream& out, std::ostream& err) {
    CampaignConfig cfg = make_config(a, cap);
    if (cfg.sector == Sector::Unrestricted) {
        throw UsageError("verify needs --sector even or odd; use the counterexample subcommand for unrestricted states");
    }
    CampaignReport rep;
    try {
        rep = verify_theorem(cfg);
    } catch (const TheoremViolation& v) {
        err << "violation: " << v.what() << "\nstate: " << v.state_json() << "\n";
        return kExitCheckFailed;
    }
    const Json j = campaign_to_json(rep);
    if (!a.out.empty()) write_text_file(a.out, j.dump(2) + "\n");
    if (!a.csv.empty()) write_text_file(a.csv, trials_csv(rep.per_trial));

    switch (fmt) {
        case Format::Json: emit(out, j); break;
        case Format::Csv: out << trials_csv(rep.per_trial); break;
        case Format::Text:
            out << "modes " << rep.n << ", sector " << to_string(rep.sector) << ", " << rep.trials << " trials, "
                << rep.cut_count << " cuts, seed " << rep.seed << "\n";
            out << "max spectral mismatch: " << brief(rep.max_mismatch) << " (trial " << rep.worst_trial << ", cut "
                << rep.worst_cut << ")\n";
            out << "tolerance:             " << brief(rep.tolerance) << "\n";
            out << "violations:            " << rep.violations << "\n";
            out << "oracle-cleared flags:  " << rep.noise_flags << "\n";
            out << "result:                " << (rep.violations == 0 ? "PASS" : "FAIL") << "\n";
            break;
    }
    err << "runtime: " << brief(rep.runtime_seconds) << " s\n";
    return rep.violations == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_counterexample(const CampaignArgs& a, Format fmt, int cap, std::ostream& out, std::ostream& err) {
    CampaignArgs b = a;
    b.sector = "unrestricted";
    const CampaignConfig cfg = make_config(b, cap);
    const CounterexampleReport rep = find_counterexample(cfg);
    const Json j = counterexample_to_json(rep);
    if (!a.out.empty()) write_text_file(a.out, j.dump(2) + "\n");
    if (!a.csv.empty()) write_text_file(a.csv, trials_csv(rep.per_trial));

    switch (fmt) {
        case Format::Json: emit(out, j); break;
        case Format::Csv: out << trials_csv(rep.per_trial); break;
        case Format::Text:
            out << "modes " << rep.n << ", " << rep.trials << " trials, seed " << rep.seed << "\n";
            out << "largest spectral mismatch: " << brief(rep.best_mismatch) << " (trial " << rep.best_trial
                << ", cut " << rep.best_cut << ")\n";
            out << "oracle re-check:           " << brief(rep.oracle_mismatch) << "\n";
            out << "state:\n";
            for (const FockBasisState& b2 : rep.best_state.support(0.0)) {
                const auto occ = b2.occupied_modes();
                out << "  [" << join_ints(occ) << "]  " << complex_text(rep.best_state.amplitude(b2)) << "\n";
            }
            break;
    }
    err << "runtime: " << brief(rep.runtime_seconds) << " s\n";
    return kExitOk;
}

// jw-check / appendix-demo / examples -------------------------------------

void faithfulness_text(const FaithfulnessReport& f, std::ostream& out) {
    out << "verdict: " << to_string(f.verdict) << " ("
        << (f.mode == ActivationMode::Generic ? "generic" : "concrete") << " activation)\n";
    out << "constraints:\n";
    for (std::size_t i = 0; i < f.system.rows.size(); ++i) {
        out << "  (" << f.system.rows[i].label << ") " << f.system.describe(i) << "\n";
    }
    if (f.system.rows.empty()) out << "  none\n";
    if (f.verdict == Verdict::Contradiction) {
        out << "witness: " << witness_text(f.system, f.witness) << "\n";
    } else {
        out << "phases:";
        for (const auto& [p, angle] : f.phases) out << " " << phase_name(p) << "=" << brief(angle);
        out << "\n";
    }
    if (f.max_offdiag_error) out << "max off-diagonal magnitude error: " << brief(*f.max_offdiag_error) << "\n";
    if (f.max_diag_error) out << "max diagonal error:               " << brief(*f.max_diag_error) << "\n";
    if (f.verdict == Verdict::Solvable) out << "verified: " << (f.verified ? "yes" : "no") << "\n";
}

void faithfulness_csv(const FaithfulnessReport& f, std::ostream& out) {
    out << "key,value\n";
    out << "verdict," << to_string(f.verdict) << "\n";
    for (std::size_t i = 0; i < f.system.rows.size(); ++i) {
        out << "row_" << f.system.rows[i].label << ',' << csv_field(f.system.describe(i)) << "\n";
    }
    std::string w;
    for (std::size_t i = 0; i < f.witness.size(); ++i) w += (i ? ";" : "") + std::to_string(f.witness[i]);
    out << "witness," << w << "\n";
    for (const auto& [p, angle] : f.phases) out << phase_name(p) << ',' << full(angle) << "\n";
    if (f.max_offdiag_error) out << "max_offdiag_error," << full(*f.max_offdiag_error) << "\n";
    if (f.max_diag_error) out << "max_diag_error," << full(*f.max_diag_error) << "\n";
    out << "verified," << (f.verified ? "true" : "false") << "\n";
}

int faithfulness_exit(const FaithfulnessReport& f) {
    return f.verdict == Verdict::Solvable && !f.verified ? kExitCheckFailed : kExitOk;
}

int cmd_jw_check(const std::string& path, const std::string& alpha, bool generic, Format fmt, int cap,
                 std::ostream& out, std::ostream& err) {
    if (path.empty() == alpha.empty()) throw UsageError("jw-check needs a state file or --alpha, not both");
    const FermionicState psi = path.empty() ? alpha_state(alpha) : load_state(path, cap, err);
    if (psi.modes() != 4) throw UsageError("jw-check needs a four-mode state");
    if (parity_check(psi) != ParityClass::Even) throw UsageError("jw-check needs an even-parity state");
    const FaithfulnessReport f = faithfulness_check(psi, generic ? ActivationMode::Generic : ActivationMode::Concrete);
    switch (fmt) {
        case Format::Json: emit(out, faithfulness_to_json(f)); break;
        case Format::Csv: faithfulness_csv(f, out); break;
        case Format::Text: faithfulness_text(f, out); break;
    }
    return faithfulness_exit(f);
}

struct TableRow {
    std::string entry;
    Complex symbolic;
    Complex numeric;
};

std::vector<TableRow> table_rows(const FermionicState& psi) {
    std::vector<TableRow> rows;
    for (const OffDiagonalEntry& e : derive_pair_sign_table()) {
        const auto num = pair_offdiagonals(psi, e.i, e.j);
        rows.push_back({e.label(), evaluate(e, psi), num[e.element == PairElement::VacuumPair ? 0 : 1]});
    }
    return rows;
}

std::string term_text(const OffDiagonalEntry& e) {
    std::string s;
    for (std::size_t t = 0; t < e.terms.size(); ++t) {
        const ProductTerm& p = e.terms[t];
        if (t == 0) {
            if (p.sign < 0) s += "-";
        } else {
            s += p.sign < 0 ? " - " : " + ";
        }
        std::string ket = phase_name(p.ket).substr(std::string("φ").size());
        std::string bra = phase_name(p.bra).substr(std::string("φ").size());
        s += "a" + ket + " a" + bra + "*";
    }
    return s;
}

void examples_text(const ExamplesReport& r, std::ostream& out) {
    for (const ExampleCheck& c : r.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": expected " << c.expected << ", computed "
            << brief(c.computed) << " (error " << brief(c.error) << ", tolerance " << brief(c.tolerance) << ")\n";
    }
}

void examples_csv(const ExamplesReport& r, std::ostream& out) {
    out << "name,expected,computed,error,tolerance,pass\n";
    for (const ExampleCheck& c : r.checks) {
        out << csv_field(c.name) << ',' << csv_field(c.expected) << ',' << full(c.computed) << ',' << full(c.error)
            << ',' << full(c.tolerance) << ',' << (c.pass ? "true" : "false") << "\n";
    }
}

int cmd_appendix_demo(const std::string& alpha, std::uint64_t seed, Format fmt, std::ostream& out) {
    const FermionicState psi = alpha.empty() ? generic_alpha_state() : alpha_state(alpha);
    const ExamplesReport ex = run_worked_examples(seed);
    const FaithfulnessReport f = faithfulness_check(psi);
    const SignTable table = derive_pair_sign_table();
    const std::vector<TableRow> rows = table_rows(psi);
    std::vector<double> mismatches;
    std::vector<std::string> cut_labels;
    for (const ModePartition& c : all_bipartitions(4)) {
        cut_labels.push_back(c.label());
        mismatches.push_back(spectral_mismatch(psi, c));
    }

    switch (fmt) {
        case Format::Json: {
            Json t = Json::array();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                t.push_back({{"entry", rows[i].entry},
                             {"closed_form", term_text(table[i])},
                             {"symbolic", {rows[i].symbolic.real(), rows[i].symbolic.imag()}},
                             {"numeric", {rows[i].numeric.real(), rows[i].numeric.imag()}},
                             {"error", std::abs(rows[i].symbolic - rows[i].numeric)}});
            }
            Json s = Json::array();
            for (std::size_t i = 0; i < mismatches.size(); ++i) {
                s.push_back({{"cut", cut_labels[i]}, {"mismatch", mismatches[i]}});
            }
            Json j;
            j["state"] = state_to_json(psi);
            j["table"] = std::move(t);
            j["spectra"] = std::move(s);
            j["faithfulness"] = faithfulness_to_json(f);
            j["witness_rows"] = f.verdict == Verdict::Contradiction ? witness_text(f.system, f.witness) : "";
            j["examples"] = examples_to_json(ex);
            emit(out, j);
            break;
        }
        case Format::Csv:
            out << "section,name,value_re,value_im,error\n";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                out << "table," << csv_field(rows[i].entry) << ',' << full(rows[i].numeric.real()) << ','
                    << full(rows[i].numeric.imag()) << ',' << full(std::abs(rows[i].symbolic - rows[i].numeric)) << "\n";
            }
            for (std::size_t i = 0; i < mismatches.size(); ++i) {
                out << "spectra," << csv_field(cut_labels[i]) << ',' << full(mismatches[i]) << ",0,"
                    << full(mismatches[i]) << "\n";
            }
            out << "faithfulness,verdict," << to_string(f.verdict) << ",,\n";
            if (f.verdict == Verdict::Contradiction) {
                out << "faithfulness,witness," << csv_field(witness_text(f.system, f.witness)) << ",,\n";
            }
            for (const ExampleCheck& c : ex.checks) {
                out << "example," << csv_field(c.name) << ',' << full(c.computed) << ",0," << full(c.error) << "\n";
            }
            break;
        case Format::Text:
            out << "pair off-diagonals of the even four-mode state\n";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                out << "  " << rows[i].entry << " = " << term_text(table[i]) << "\n      numeric "
                    << complex_text(rows[i].numeric) << ", sign table " << complex_text(rows[i].symbolic)
                    << ", error " << brief(std::abs(rows[i].symbolic - rows[i].numeric)) << "\n";
            }
            out << "\nspectral mismatch per bipartition\n";
            for (std::size_t i = 0; i < mismatches.size(); ++i) {
                out << "  " << cut_labels[i] << "  " << brief(mismatches[i]) << "\n";
            }
            out << "\nqubit mapping\n";
            faithfulness_text(f, out);
            out << "\nworked examples\n";
            examples_text(ex, out);
            break;
    }
    return ex.all_pass() && faithfulness_exit(f) == kExitOk ? kExitOk : kExitCheckFailed;
}

int cmd_examples(std::uint64_t seed, Format fmt, std::ostream& out) {
    const ExamplesReport ex = run_worked_examples(seed);
    switch (fmt) {
        case Format::Json: emit(out, examples_to_json(ex)); break;
        case Format::Csv: examples_csv(ex, out); break;
        case Format::Text:
            examples_text(ex, out);
            out << (ex.all_pass() ? "all checks passed\n" : "some checks FAILED\n");
            break;
    }
    return ex.all_pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int max_modes_from_env() {
    const char* v = std::getenv("FERMI_MAX_MODES");
    if (v == nullptr) return kDefaultMaxModes;
    int n = 0;
    const std::string_view s(v);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || n < 1) return kDefaultMaxModes;
    return std::min(n, kMaxMaskModes);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fermiqi: fermionic-mode reductions, superselection checks and spectral-match campaigns"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    std::string format = "text";
    auto add_format = [&format](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    };

    ReduceArgs red;
    auto* reduce = app.add_subcommand("reduce", "Reduced density matrix of a pure state");
    reduce->add_option("state", red.state, "State file")->required();
    auto* trace_opt = reduce->add_option("--trace", red.trace, "Modes to trace out, e.g. 2,3");
    auto* keep_opt = reduce->add_option("--keep", red.keep, "Modes to keep, e.g. 1");
    reduce->add_option("--out", red.out, "Write the reduced density matrix to this file");
    add_format(reduce);

    std::string analyze_state;
    std::vector<std::string> cuts;
    auto* analyze = app.add_subcommand("analyze", "Parity, spectra, entropies and mismatch across cuts");
    analyze->add_option("state", analyze_state, "State file")->required();
    analyze->add_option("--cut", cuts, "Cut such as 1,2|3,4; repeatable; default is every bipartition");
    add_format(analyze);

    CampaignArgs ver;
    auto* verify = app.add_subcommand("verify", "Randomised spectral-match campaign for parity-definite states");
    verify->add_option("--modes", ver.modes, "Number of modes")->required();
    verify->add_option("--trials", ver.trials, "Number of sampled states");
    verify->add_option("--seed", ver.seed, "64-bit seed");
    verify->add_option("--sector", ver.sector, "even or odd");
    verify->add_option("--tol", ver.tol, "Mismatch tolerance");
    verify->add_option("--threads", ver.threads, "Worker threads, 0 for all cores");
    verify->add_option("--out", ver.out, "Write the JSON report to this file");
    verify->add_option("--csv", ver.csv, "Write per-trial CSV to this file");
    add_format(verify);

    CampaignArgs cex;
    cex.trials = 1000;
    cex.modes = 2;
    auto* counter = app.add_subcommand("counterexample", "Search unrestricted states for the largest spectral mismatch");
    counter->add_option("--modes", cex.modes, "Number of modes");
    counter->add_option("--trials", cex.trials, "Number of states, trial 0 is the uniform two-mode benchmark");
    counter->add_option("--seed", cex.seed, "64-bit seed");
    counter->add_option("--threads", cex.threads, "Worker threads, 0 for all cores");
    counter->add_option("--out", cex.out, "Write the JSON report to this file");
    counter->add_option("--csv", cex.csv, "Write per-trial CSV to this file");
    add_format(counter);

    std::string jw_state;
    std::string jw_alpha;
    bool jw_generic = false;
    auto* jw = app.add_subcommand("jw-check", "Decide whether an even four-mode state maps faithfully to qubits");
    jw->add_option("state", jw_state, "State file");
    jw->add_option("--alpha", jw_alpha, "Eight coefficients a0,a12,a13,a14,a23,a24,a34,a1234");
    jw->add_flag("--generic", jw_generic, "Keep every constraint regardless of vanishing amplitudes");
    add_format(jw);

    std::string demo_alpha;
    std::uint64_t demo_seed = 2016;
    auto* demo = app.add_subcommand("appendix-demo", "Even four-mode walkthrough: off-diagonals, spectra, phase constraints");
    demo->add_option("--alpha", demo_alpha, "Eight coefficients a0,a12,a13,a14,a23,a24,a34,a1234");
    demo->add_option("--seed", demo_seed, "Seed for the randomised checks");
    add_format(demo);

    std::uint64_t ex_seed = 2016;
    auto* examples = app.add_subcommand("examples", "Recompute every worked example");
    examples->add_option("--seed", ex_seed, "Seed for the randomised checks");
    add_format(examples);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::RequiredError) && app.get_subcommands().empty()) {
            err << app.help();
        }
        return kExitUsage;
    }

    const Format fmt = parse_format(format);
    const int cap = max_modes_from_env();
    try {
        if (reduce->parsed()) return cmd_reduce(red, trace_opt->count() > 0, keep_opt->count() > 0, fmt, cap, out, err);
        if (analyze->parsed()) return cmd_analyze(analyze_state, cuts, fmt, cap, out, err);
        if (verify->parsed()) return cmd_verify(ver, fmt, cap, out, err);
        if (counter->parsed()) return cmd_counterexample(cex, fmt, cap, out, err);
        if (jw->parsed()) return cmd_jw_check(jw_state, jw_alpha, jw_generic, fmt, cap, out, err);
        if (demo->parsed()) return cmd_appendix_demo(demo_alpha, demo_seed, fmt, out);
        if (examples->parsed()) return cmd_examples(ex_seed, fmt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}

}  // namespace fermiqi
