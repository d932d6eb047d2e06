#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tomofit/density.hpp"
#include "tomofit/errors.hpp"
#include "tomofit/fit.hpp"
#include "tomofit/parse.hpp"
#include "tomofit/projection.hpp"
#include "tomofit/records.hpp"
#include "tomofit/stokes.hpp"
#include "tomofit/tmatrix.hpp"

namespace tomofit {

enum class RunMethod { automatic, mle, project, raw };
enum class RunFormat { csv, json, autodetect };
enum class OutputFormat { json, csv };

/**
 * Batch runner configuration. `method` picks how each record is turned into
 * a physical density matrix:
 *   automatic  gate on physicality: passthrough when satisfied, MLE when not
 *   mle        always run the seeded maximum-likelihood fit
 *   project    fit-free radial projection onto the Bloch sphere
 *   raw        emit the measured matrix unrepaired, for inspection
 */
struct RunConfig {
    std::string input_path;  // "-" reads stdin
    RunFormat format = RunFormat::autodetect;
    RunMethod method = RunMethod::automatic;
    CostKind cost = CostKind::stokes_lsq;
    double epsilon = 0.1;  // near-|0> seeding threshold
    double tol = 0.0;      // physicality gate tolerance
    OutputFormat output = OutputFormat::json;
    bool compare_seeds = false;
};

struct OutputRecord {
    std::string label;
    StokesVector s_measured;
    bool physical_input = false;
    std::string method_used;
    DensityMatrix rho;
    StokesVector s_fitted;
    std::pair<double, double> eigenvalues;
    double purity = 0.0;
    double cost = 0.0;
    std::optional<SeedReport> seed;
    int iterations = 0;
    bool converged = true;
    // filled only under compare_seeds, for records that ran the optimizer
    std::optional<int> iterations_seeded;
    std::optional<int> iterations_naive;
};

namespace detail {

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline const char* branch_name(SeedBranch b) {
    return b == SeedBranch::generic ? "generic" : "near_zero_state";
}

inline std::string method_name(FitMethod m) {
    switch (m) {
        case FitMethod::exact_passthrough: return "exact_passthrough";
        case FitMethod::mle: return "mle";
        default: return "projection";
    }
}

inline void write_stokes_json(std::ostream& out, const StokesVector& s) {
    out << "{\"s1\": " << format_real(s.s1) << ", \"s2\": " << format_real(s.s2)
        << ", \"s3\": " << format_real(s.s3) << "}";
}

inline void write_json(std::ostream& out, const std::vector<OutputRecord>& records) {
    out << "[\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const OutputRecord& r = records[i];
        out << "  {\n";
        out << "    \"label\": \"" << json_escape(r.label) << "\",\n";
        out << "    \"s_measured\": ";
        write_stokes_json(out, r.s_measured);
        out << ",\n";
        out << "    \"physical_input\": " << (r.physical_input ? "true" : "false") << ",\n";
        out << "    \"method_used\": \"" << r.method_used << "\",\n";
        out << "    \"rho\": {\"r00\": " << format_real(r.rho.r00)
            << ", \"r11\": " << format_real(r.rho.r11) << ", \"r01\": {\"re\": "
            << format_real(r.rho.r01_re) << ", \"im\": " << format_real(r.rho.r01_im)
            << "}, \"raw\": " << (r.rho.raw ? "true" : "false") << "},\n";
        out << "    \"s_fitted\": ";
        write_stokes_json(out, r.s_fitted);
        out << ",\n";
        out << "    \"eigenvalues\": [" << format_real(r.eigenvalues.first) << ", "
            << format_real(r.eigenvalues.second) << "],\n";
        out << "    \"purity\": " << format_real(r.purity) << ",\n";
        out << "    \"cost\": " << format_real(r.cost) << ",\n";
        if (r.seed) {
            out << "    \"seed\": {\"t1\": " << format_real(r.seed->t.t1)
                << ", \"t2\": " << format_real(r.seed->t.t2)
                << ", \"t3\": " << format_real(r.seed->t.t3)
                << ", \"t4\": " << format_real(r.seed->t.t4)
                << ", \"clamped\": " << (r.seed->clamped ? "true" : "false")
                << ", \"branch\": \"" << branch_name(r.seed->branch) << "\", \"s_in\": ";
            write_stokes_json(out, r.seed->s_in);
            out << "},\n";
        }
        if (r.iterations_seeded)
            out << "    \"iterations_seeded\": " << *r.iterations_seeded << ",\n";
        if (r.iterations_naive)
            out << "    \"iterations_naive\": " << *r.iterations_naive << ",\n";
        out << "    \"iterations\": " << r.iterations << ",\n";
        out << "    \"converged\": " << (r.converged ? "true" : "false") << "\n";
        out << "  }" << (i + 1 < records.size() ? "," : "") << "\n";
    }
    out << "]\n";
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline void write_csv(std::ostream& out, const std::vector<OutputRecord>& records,
                      bool compare_seeds) {
    out << "label,s1_measured,s2_measured,s3_measured,physical_input,method_used,"
           "r00,r11,r01_re,r01_im,raw,s1_fitted,s2_fitted,s3_fitted,eig_hi,eig_lo,"
           "purity,cost,seed_t1,seed_t2,seed_t3,seed_t4,seed_clamped,seed_branch,"
           "iterations,converged";
    if (compare_seeds) out << ",iterations_seeded,iterations_naive";
    out << "\n";
    for (const OutputRecord& r : records) {
        out << csv_escape(r.label) << ',' << format_real(r.s_measured.s1) << ','
            << format_real(r.s_measured.s2) << ',' << format_real(r.s_measured.s3) << ','
            << (r.physical_input ? "true" : "false") << ',' << r.method_used << ','
            << format_real(r.rho.r00) << ',' << format_real(r.rho.r11) << ','
            << format_real(r.rho.r01_re) << ',' << format_real(r.rho.r01_im) << ','
            << (r.rho.raw ? "true" : "false") << ',' << format_real(r.s_fitted.s1) << ','
            << format_real(r.s_fitted.s2) << ',' << format_real(r.s_fitted.s3) << ','
            << format_real(r.eigenvalues.first) << ',' << format_real(r.eigenvalues.second)
            << ',' << format_real(r.purity) << ',' << format_real(r.cost) << ',';
        if (r.seed) {
            out << format_real(r.seed->t.t1) << ',' << format_real(r.seed->t.t2) << ','
                << format_real(r.seed->t.t3) << ',' << format_real(r.seed->t.t4) << ','
                << (r.seed->clamped ? "true" : "false") << ',' << branch_name(r.seed->branch);
        } else {
            out << ",,,,,";
        }
        out << ',' << r.iterations << ',' << (r.converged ? "true" : "false");
        if (compare_seeds) {
            out << ',';
            if (r.iterations_seeded) out << *r.iterations_seeded;
            out << ',';
            if (r.iterations_naive) out << *r.iterations_naive;
        }
        out << "\n";
    }
}

inline SourceFormat resolve_format(const RunConfig& cfg, std::string_view text) {
    if (cfg.format == RunFormat::csv) return SourceFormat::csv;
    if (cfg.format == RunFormat::json) return SourceFormat::json;
    if (cfg.input_path.size() >= 5 &&
        cfg.input_path.compare(cfg.input_path.size() - 5, 5, ".json") == 0)
        return SourceFormat::json;
    if (cfg.input_path.size() >= 4 &&
        cfg.input_path.compare(cfg.input_path.size() - 4, 4, ".csv") == 0)
        return SourceFormat::csv;
    // Sniff: JSON documents here always start with '{' or '['.
    for (const char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        return (c == '{' || c == '[') ? SourceFormat::json : SourceFormat::csv;
    }
    return SourceFormat::csv;
}

struct RecordView {
    StokesVector s;
    std::string label;
    const CountRecord* counts = nullptr;  // set when the record is four-count
};

inline RecordView view_of(const AnyRecord& any) {
    RecordView v;
    if (const auto* c = std::get_if<CountRecord>(&any)) {
        v.s = stokes_from_counts(*c);
        v.label = c->label;
        v.counts = c;
    } else if (const auto* c6 = std::get_if<SixCountRecord>(&any)) {
        v.s = stokes_from_six_counts(*c6);
        v.label = c6->label;
    } else {
        const auto& in = std::get<IntensityRecord>(any);
        v.s = stokes_from_intensities(in);
        v.label = in.label;
    }
    return v;
}

inline OutputRecord make_output(const RecordView& view, const FitResult& fit_result,
                                bool physical_input) {
    OutputRecord out;
    out.label = view.label;
    out.s_measured = view.s;
    out.physical_input = physical_input;
    out.method_used = method_name(fit_result.method);
    out.rho = fit_result.rho;
    out.s_fitted = stokes_from_density(fit_result.rho);
    out.eigenvalues = tomofit::eigenvalues(fit_result.rho);
    out.purity = tomofit::purity(fit_result.rho);
    out.cost = fit_result.cost;
    out.seed = fit_result.seed;
    out.iterations = fit_result.iterations;
    out.converged = fit_result.converged;
    return out;
}

inline OutputRecord process_record(const ParsedRecord& parsed, const RunConfig& cfg,
                                   const FitOptions& opts) {
    const RecordView view = view_of(parsed.record);
    const bool physical = is_physical(view.s, cfg.tol);

    if (cfg.cost == CostKind::count_likelihood && view.counts == nullptr &&
        (cfg.method == RunMethod::mle || (cfg.method == RunMethod::automatic && !physical)))
        throw validation_error(parsed.location,
                               "count_likelihood cost requires four-count records");

    if (cfg.method == RunMethod::raw) {
        OutputRecord out;
        out.label = view.label;
        out.s_measured = view.s;
        out.physical_input = physical;
        out.method_used = "raw";
        out.rho = density_from_stokes(view.s);
        out.s_fitted = view.s;
        out.eigenvalues = tomofit::eigenvalues(out.rho);
        out.purity = tomofit::purity(out.rho);
        return out;
    }

    if (cfg.method == RunMethod::project)
        return make_output(view, fit_via_projection(view.s), physical);

    FitResult result;
    bool ran_mle = false;
    if (cfg.method == RunMethod::mle) {
        result = fit_mle(view.s, view.counts, opts, cfg.epsilon);
        ran_mle = true;
    } else {
        result = fit(view.s, view.counts, opts, cfg.epsilon, cfg.tol);
        ran_mle = result.method == FitMethod::mle;
    }
    OutputRecord out = make_output(view, result, physical);
    if (cfg.compare_seeds && ran_mle) {
        const TParams naive{1.0, 1.0, 1.0, 1.0};
        OptimizeOutcome alt;
        if (opts.cost_kind == CostKind::count_likelihood) {
            const CountRecord record = *view.counts;
            alt = optimize([&record](const TParams& t) { return cost_count_likelihood(t, record); },
                           naive, opts);
        } else {
            const StokesVector s = view.s;
            alt = optimize([&s](const TParams& t) { return cost_stokes_lsq(t, s); }, naive, opts);
        }
        out.iterations_seeded = result.iterations;
        out.iterations_naive = alt.iterations;
    }
    return out;
}

}  // namespace detail

/// Batch entry point behind the command-line tool. Reads all records, fits
/// them in input order, writes one output record per input record to `out`
/// and diagnostics to `err`. Returns the process exit status: 0 on success,
/// 2 on the first parse/validation problem, 1 when the optimizer aborted.
/// The environment variable TOMOFIT_MAX_ITER overrides the iteration budget.
inline int run(const RunConfig& cfg, std::istream* stdin_stream, std::ostream& out,
               std::ostream& err) {
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 1.0)) {
        err << "tomofit: epsilon must lie in [0, 1)\n";
        return 2;
    }
    if (!(cfg.tol >= 0.0)) {
        err << "tomofit: tol must be non-negative\n";
        return 2;
    }

    FitOptions opts;
    opts.cost_kind = cfg.cost;
    if (const char* env = std::getenv("TOMOFIT_MAX_ITER")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            err << "tomofit: TOMOFIT_MAX_ITER must be a positive integer\n";
            return 2;
        }
        opts.max_iterations = static_cast<int>(v);
    }

    std::string text;
    if (cfg.input_path == "-") {
        if (stdin_stream == nullptr) {
            err << "tomofit: no stdin available\n";
            return 2;
        }
        std::ostringstream buffer;
        buffer << stdin_stream->rdbuf();
        text = buffer.str();
    } else {
        std::ifstream file(cfg.input_path, std::ios::binary);
        if (!file) {
            err << "tomofit: cannot open '" << cfg.input_path << "'\n";
            return 2;
        }
        std::ostringstream buffer;
        buffer << file.rdbuf();
        text = buffer.str();
    }

    std::vector<ParsedRecord> parsed;
    try {
        parsed = parse_records(text, detail::resolve_format(cfg, text));
    } catch (const error& e) {
        err << "tomofit: " << e.what() << "\n";
        return 2;
    }

    std::vector<OutputRecord> records;
    records.reserve(parsed.size());
    for (const ParsedRecord& p : parsed) {
        try {
            records.push_back(detail::process_record(p, cfg, opts));
        } catch (const optimizer_abort& e) {
            err << "tomofit: record " << p.location << ": optimizer abort: " << e.what() << "\n";
            return 1;
        } catch (const error& e) {
            err << "tomofit: record " << p.location << ": " << e.what() << "\n";
            return 2;
        }
    }

    if (cfg.output == OutputFormat::json)
        detail::write_json(out, records);
    else
        detail::write_csv(out, records, cfg.compare_seeds);
    return 0;
}

}  // namespace tomofit
