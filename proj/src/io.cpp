// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fermiqi {

namespace {

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double as_number(const Json& v, const char* what) {
    if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(std::string(what) + " must be finite");
    return d;
}

int as_int(const Json& v, const char* what) {
    if (!v.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < -1000000 || x > 1000000) throw ParseError(std::string(what) + " out of range");
    return static_cast<int>(x);
}

int checked_mode_count(int n, int max_modes) {
    if (n < 1) throw ParseError("mode count must be positive");
    if (n > max_modes) {
        throw ParseError("mode count " + std::to_string(n) + " exceeds the cap of " + std::to_string(max_modes) +
                         " (set FERMI_MAX_MODES to raise it)");
    }
    return n;
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Recursive-descent parser for complex literals.
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | primary
//   primary := number ['i'] | 'i' | ('√' | 'sqrt') primary | '(' expr ')'
class ComplexParser {
public:
    explicit ComplexParser(std::string_view s) : s_(s) {}

    Complex parse() {
        Complex v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip();
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Complex expr() {
        Complex v = term();
        for (;;) {
            if (accept("+")) {
                v += term();
            } else if (accept("-")) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    Complex term() {
        Complex v = unary();
        for (;;) {
            if (accept("*")) {
                v *= unary();
            } else if (accept("/")) {
                const Complex d = unary();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    Complex unary() {
        if (accept("+")) return unary();
        if (accept("-")) return -unary();
        return primary();
    }

    Complex primary() {
        if (accept("(")) {
            const Complex v = expr();
            if (!accept(")")) fail("expected ')'");
            return v;
        }
        if (accept("\xE2\x88\x9A") || accept("sqrt")) {
            const Complex v = primary();
            if (v.imag() != 0.0 || v.real() < 0.0) return std::sqrt(v);
            return {std::sqrt(v.real()), 0.0};
        }
        if (accept("i")) return {0.0, 1.0};
        skip();
        double x = 0.0;
        const char* begin = s_.data() + pos_;
        const char* end = s_.data() + s_.size();
        const auto [ptr, ec] = std::from_chars(begin, end, x);
        if (ec != std::errc() || ptr == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            return {0.0, x};
        }
        return {x, 0.0};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Json state_to_json(const FermionicState& psi) {
    Json terms = Json::array();
    for (Mask z = 0; z < static_cast<Mask>(psi.dimension()); ++z) {
        const Complex a = psi.amplitude(z);
        if (a == 0.0) continue;
        terms.push_back({{"occ", modes_of(z)}, {"re", a.real()}, {"im", a.imag()}});
    }
    Json j;
    j["modes"] = psi.modes();
    j["terms"] = std::move(terms);
    j["normalized"] = psi.is_normalized(kNormalizationTolerance);
    return j;
}

StateFile state_from_json(const Json& j, int max_modes) {
    if (!j.is_object()) throw ParseError("state file must be a JSON object");
    const int n = checked_mode_count(as_int(require(j, "modes"), "\"modes\""), std::min(max_modes, kMaxMaskModes));
    const Json& terms = require(j, "terms");
    if (!terms.is_array()) throw ParseError("\"terms\" must be an array");

    FermionicState psi(n);
    std::vector<bool> seen(psi.dimension(), false);
    for (const Json& t : terms) {
        const Json& occ = require(t, "occ");
        if (!occ.is_array()) throw ParseError("\"occ\" must be an array");
        Mask m = 0;
        int prev = 0;
        for (const Json& k : occ) {
            const int mode = as_int(k, "occupied mode");
            if (mode < 1 || mode > n) throw ParseError("occupied mode " + std::to_string(mode) + " outside 1.." + std::to_string(n));
            if (mode <= prev) throw ParseError("occupied modes must be strictly increasing");
            prev = mode;
            m |= mode_bit(mode);
        }
        if (seen[m]) throw ParseError("duplicate occupation list " + occ.dump());
        seen[m] = true;
        const double re = t.contains("re") ? as_number(t.at("re"), "\"re\"") : 0.0;
        const double im = t.contains("im") ? as_number(t.at("im"), "\"im\"") : 0.0;
        psi.set_amplitude(FockBasisState(n, m), {re, im});
    }

    StateFile out{std::move(psi), false};
    if (j.contains("normalized")) {
        const Json& flag = j.at("normalized");
        if (!flag.is_boolean()) throw ParseError("\"normalized\" must be true or false");
        out.declared_normalized = flag.get<bool>();
        if (out.declared_normalized && !out.state.is_normalized(kNormalizationTolerance)) {
            throw ParseError("state is flagged normalized but its squared norm is " +
                             format_number(out.state.amplitudes().squaredNorm(), 17));
        }
    }
    return out;
}

Json density_to_json(const DensityOperator& rho) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index r = 0; r < rho.mat.rows(); ++r) {
        Json rr = Json::array();
        Json ri = Json::array();
        for (Eigen::Index c = 0; c < rho.mat.cols(); ++c) {
            rr.push_back(rho.mat(r, c).real());
            ri.push_back(rho.mat(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    Json j;
    j["modes"] = rho.modes;
    j["matrix_re"] = std::move(re);
    j["matrix_im"] = std::move(im);
    return j;
}

DensityOperator density_from_json(const Json& j, int max_modes) {
    if (!j.is_object()) throw ParseError("density file must be a JSON object");
    const Json& modes = require(j, "modes");
    if (!modes.is_array()) throw ParseError("\"modes\" must be an array of mode indices");
    DensityOperator rho;
    int prev = 0;
    for (const Json& k : modes) {
        const int mode = as_int(k, "mode");
        if (mode < 1 || mode > kMaxMaskModes) throw ParseError("mode " + std::to_string(mode) + " out of range");
        if (mode <= prev) throw ParseError("density modes must be strictly increasing");
        prev = mode;
        rho.modes.push_back(mode);
    }
    checked_mode_count(std::max<int>(1, static_cast<int>(rho.modes.size())), max_modes);
    const Eigen::Index dim = Eigen::Index{1} << rho.modes.size();
    const Json& re = require(j, "matrix_re");
    const Json* im = j.contains("matrix_im") ? &j.at("matrix_im") : nullptr;
    auto check_shape = [dim](const Json& m, const char* what) {
        if (!m.is_array() || static_cast<Eigen::Index>(m.size()) != dim) {
            throw ParseError(std::string(what) + " must have 2^modes rows");
        }
        for (const Json& row : m) {
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
                throw ParseError(std::string(what) + " must be square with 2^modes columns");
            }
        }
    };
    check_shape(re, "\"matrix_re\"");
    if (im) check_shape(*im, "\"matrix_im\"");
    rho.mat = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const auto ur = static_cast<std::size_t>(r);
            const auto uc = static_cast<std::size_t>(c);
            const double x = as_number(re[ur][uc], "matrix entry");
            const double y = im ? as_number((*im)[ur][uc], "matrix entry") : 0.0;
            rho.mat(r, c) = {x, y};
        }
    }
    return rho;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("error writing " + path.string());
}

StateFile read_state_file(const std::filesystem::path& path, int max_modes) {
    return state_from_json(parse_json(read_text_file(path)), max_modes);
}

void write_state_file(const std::filesystem::path& path, const FermionicState& psi) {
    write_text_file(path, state_to_json(psi).dump(2) + "\n");
}

DensityOperator read_density_file(const std::filesystem::path& path, int max_modes) {
    return density_from_json(parse_json(read_text_file(path)), max_modes);
}

void write_density_file(const std::filesystem::path& path, const DensityOperator& rho) {
    write_text_file(path, density_to_json(rho).dump(2) + "\n");
}

std::vector<int> parse_mode_list(std::string_view text, int n) {
    std::vector<int> out;
    text = trim(text);
    if (text.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        const std::string_view item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        int k = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw ParseError("invalid mode \"" + std::string(item) + "\" in list \"" + std::string(text) + "\"");
        }
        if (k < 1 || k > n) throw ParseError("mode " + std::to_string(k) + " outside 1.." + std::to_string(n));
        if (std::find(out.begin(), out.end(), k) != out.end()) {
            throw ParseError("mode " + std::to_string(k) + " listed twice");
        }
        out.push_back(k);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

ModePartition parse_cut(std::string_view text, int n) {
    const auto bar = text.find('|');
    if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos) {
        throw ParseError("cut must look like \"1,2|3,4\", got \"" + std::string(text) + "\"");
    }
    std::vector<int> a = parse_mode_list(text.substr(0, bar), n);
    std::vector<int> b = parse_mode_list(text.substr(bar + 1), n);
    try {
        return {n, std::move(a), std::move(b)};
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid cut \"") + std::string(text) + "\": " + e.what());
    }
}

std::vector<Complex> parse_complex_list(std::string_view text) {
    std::vector<Complex> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        const std::string_view item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        if (item.empty()) throw ParseError("empty entry in list \"" + std::string(text) + "\"");
        out.push_back(ComplexParser(item).parse());
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string format_number(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

Json spectrum_to_json(const Spectrum& s) { return s.eigenvalues; }

Json cut_analysis_to_json(const CutAnalysis& a) {
    Json j;
    j["cut"] = a.cut.label();
    j["parity"] = to_string(a.parity);
    j["spectrum_A"] = spectrum_to_json(a.spectrum_kept);
    j["spectrum_B"] = spectrum_to_json(a.spectrum_traced);
    j["mismatch"] = a.mismatch;
    j["entropy_A"] = a.entropy_kept;
    j["entropy_B"] = a.entropy_traced;
    j["mutual_info"] = a.mutual_information;
    return j;
}

namespace {

Json trials_to_json(const std::vector<TrialResult>& trials) {
    Json arr = Json::array();
    for (const TrialResult& t : trials) {
        arr.push_back({{"trial", t.trial}, {"max_mismatch", t.max_mismatch}, {"worst_cut", t.worst_cut}});
    }
    return arr;
}

}  // namespace

Json campaign_to_json(const CampaignReport& r) {
    Json j;
    j["modes"] = r.n;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["sector"] = to_string(r.sector);
    j["tolerance"] = r.tolerance;
    j["cut_count"] = r.cut_count;
    j["max_mismatch"] = r.max_mismatch;
    j["worst_trial"] = r.worst_trial;
    j["worst_cut"] = r.worst_cut;
    j["violations"] = r.violations;
    j["noise_flags"] = r.noise_flags;
    j["per_trial"] = trials_to_json(r.per_trial);
    return j;
}

Json counterexample_to_json(const CounterexampleReport& r) {
    Json j;
    j["modes"] = r.n;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["best_trial"] = r.best_trial;
    j["best_cut"] = r.best_cut;
    j["best_mismatch"] = r.best_mismatch;
    j["oracle_mismatch"] = r.oracle_mismatch;
    j["best_state"] = state_to_json(r.best_state);
    j["per_trial"] = trials_to_json(r.per_trial);
    return j;
}

Json examples_to_json(const ExamplesReport& r) {
    Json checks = Json::array();
    for (const ExampleCheck& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"expected", c.expected},
                          {"computed", c.computed},
                          {"error", c.error},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    Json j;
    j["all_pass"] = r.all_pass();
    j["checks"] = std::move(checks);
    return j;
}

Json faithfulness_to_json(const FaithfulnessReport& r) {
    Json vars = Json::array();
    for (const FockBasisState& v : r.system.variables) vars.push_back(phase_name(v));
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.system.rows.size(); ++i) {
        const PhaseConstraint& row = r.system.rows[i];
        rows.push_back({{"label", row.label},
                        {"coeffs", row.coeffs},
                        {"parity", row.parity},
                        {"equation", r.system.describe(i)},
                        {"sources", row.sources}});
    }
    Json phases = Json::object();
    for (const auto& [p, angle] : r.phases) phases[phase_name(p)] = angle;

    Json j;
    j["verdict"] = to_string(r.verdict);
    j["activation"] = r.mode == ActivationMode::Generic ? "generic" : "concrete";
    j["variables"] = std::move(vars);
    j["rows"] = std::move(rows);
    j["activated_rows"] = r.activated_rows;
    j["witness"] = r.witness;
    j["phases"] = std::move(phases);
    j["max_offdiag_error"] = r.max_offdiag_error ? Json(*r.max_offdiag_error) : Json(nullptr);
    j["max_diag_error"] = r.max_diag_error ? Json(*r.max_diag_error) : Json(nullptr);
    j["verified"] = r.verified;
    return j;
}

}  // namespace fermiqi
