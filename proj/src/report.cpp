#include "vlcmimo/report.hpp"

#include <cstdio>
#include <map>

namespace vlcmimo {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

const char* method_name(DimmingMethod m) {
    return m == DimmingMethod::Fill ? "fill" : "complement";
}

}  // namespace

std::vector<PointRecord> merge_sweep_rows(const SweepResult* cer, const SweepResult* bound,
                                          const SweepResult* mi) {
    std::vector<PointRecord> rows = cer ? cer->rows : std::vector<PointRecord>{};
    auto fold = [&rows](const SweepResult* extra, auto apply) {
        if (!extra) return;
        for (const auto& src : extra->rows) {
            bool attached = false;
            for (auto& row : rows)
                if (row.snr_db == src.snr_db && !row.detector.empty()) {
                    apply(row, src);
                    attached = true;
                }
            if (!attached) {
                PointRecord standalone;
                standalone.snr_db = src.snr_db;
                apply(standalone, src);
                rows.push_back(std::move(standalone));
            }
        }
    };
    fold(bound, [](PointRecord& dst, const PointRecord& src) {
        dst.bound_raw = src.bound_raw;
        dst.bound_clamped = src.bound_clamped;
        dst.bound_se = src.bound_se;
    });
    fold(mi, [](PointRecord& dst, const PointRecord& src) {
        dst.mi = src.mi;
        dst.mi_se = src.mi_se;
    });
    return rows;
}

std::string sweep_csv(const std::vector<PointRecord>& rows) {
    std::string out =
        "snr_db,detector,trials,errors,cer,ci_lo,ci_hi,fallbacks,"
        "bound_raw,bound_clamped,mi,mi_se\n";
    for (const auto& row : rows) {
        out += fmt(row.snr_db);
        out += ',';
        out += row.detector;
        out += ',';
        if (!row.detector.empty()) {
            out += std::to_string(row.trials) + ',' + std::to_string(row.errors) + ',' +
                   fmt(row.cer) + ',' + fmt(row.ci_lo) + ',' + fmt(row.ci_hi) + ',' +
                   std::to_string(row.fallbacks) + ',';
        } else {
            out += ",,,,,,";
        }
        out += fmt(row.bound_raw) + ',' + fmt(row.bound_clamped) + ',' + fmt(row.mi) + ',' +
               fmt(row.mi_se) + '\n';
    }
    return out;
}

nlohmann::json sweep_json_rows(const std::vector<PointRecord>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json obj;
        obj["snr_db"] = row.snr_db;
        obj["detector"] = row.detector;
        if (!row.detector.empty()) {
            obj["trials"] = row.trials;
            obj["errors"] = row.errors;
            obj["cer"] = row.cer;
            obj["ci_lo"] = row.ci_lo;
            obj["ci_hi"] = row.ci_hi;
            obj["fallbacks"] = row.fallbacks;
        } else {
            obj["trials"] = nullptr;
            obj["errors"] = nullptr;
            obj["cer"] = nullptr;
            obj["ci_lo"] = nullptr;
            obj["ci_hi"] = nullptr;
            obj["fallbacks"] = nullptr;
        }
        auto put = [&obj](const char* key, const std::optional<double>& v) {
            if (v)
                obj[key] = *v;
            else
                obj[key] = nullptr;
        };
        put("bound_raw", row.bound_raw);
        put("bound_clamped", row.bound_clamped);
        put("mi", row.mi);
        put("mi_se", row.mi_se);
        out.push_back(std::move(obj));
    }
    return out;
}

std::string codebook_dump_text(const CodebookSpec& spec) {
    const auto book = enumerate_codebook(spec);
    std::string out = "# n_t=" + std::to_string(spec.n_t) + " gamma=" +
                      std::to_string(spec.ones_per_row) + "/" + std::to_string(spec.n_t) +
                      " method=" + method_name(spec.method) +
                      " k=" + std::to_string(message_length(spec.n_t)) + "\n";
    for (const auto& cw : book) {
        for (int r = 0; r < cw.size(); ++r) {
            std::string row = cw.row_string(r);
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ' ';
                out += row[i];
            }
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

nlohmann::json codebook_dump_json(const CodebookSpec& spec) {
    const auto book = enumerate_codebook(spec);
    nlohmann::json out;
    out["n_t"] = spec.n_t;
    out["gamma"] = std::to_string(spec.ones_per_row) + "/" + std::to_string(spec.n_t);
    out["method"] = method_name(spec.method);
    out["k"] = message_length(spec.n_t);
    nlohmann::json matrices = nlohmann::json::array();
    for (const auto& cw : book) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < cw.size(); ++r) rows.push_back(cw.row_string(r));
        matrices.push_back(std::move(rows));
    }
    out["matrices"] = std::move(matrices);
    return out;
}

}  // namespace vlcmimo
