#pragma once

// Serialization: shortest round-trip number formatting, angle parsing for
// CLI flags, run manifests, and CSV/JSON writers for the record types the
// command-line tool emits.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "qwalk/core.hpp"

namespace qwalk {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const std::to_chars_result r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string format_int(std::int64_t v) {
    char buf[32];
    const std::to_chars_result r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// Accepts a plain decimal, "pi", or "[sign][coeff]pi[/div]" (also with the
// two-byte UTF-8 pi glyph). "pi/6" parses to exactly the double pi / 6.
inline double parse_angle(std::string_view text) {
    std::string s;
    s.reserve(text.size());
    for (char ch : text)
        if (ch != ' ' && ch != '\t') s.push_back(ch);
    // normalize the UTF-8 glyph
    for (std::size_t p; (p = s.find("\xcf\x80")) != std::string::npos;)
        s.replace(p, 2, "pi");

    auto parse_number = [](std::string_view t) -> std::optional<double> {
        double v = 0.0;
        const char* first = t.data();
        const char* last = t.data() + t.size();
        const std::from_chars_result r = std::from_chars(first, last, v);
        if (r.ec != std::errc{} || r.ptr != last) return std::nullopt;
        return v;
    };

    const std::size_t at = s.find("pi");
    if (at == std::string::npos) {
        if (auto v = parse_number(s)) return *v;
        throw std::invalid_argument("unparseable angle: '" + std::string(text) + "'");
    }

    double sign = 1.0;
    std::string head = s.substr(0, at);
    if (!head.empty() && (head.front() == '+' || head.front() == '-')) {
        if (head.front() == '-') sign = -1.0;
        head.erase(head.begin());
    }
    if (!head.empty() && head.back() == '*') head.pop_back();
    double coeff = 1.0;
    if (!head.empty()) {
        if (auto v = parse_number(head))
            coeff = *v;
        else
            throw std::invalid_argument("unparseable angle: '" + std::string(text) + "'");
    }

    std::string tail = s.substr(at + 2);
    double div = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/')
            throw std::invalid_argument("unparseable angle: '" + std::string(text) + "'");
        tail.erase(tail.begin());
        const auto v = parse_number(tail);
        if (!v || *v == 0.0)
            throw std::invalid_argument("unparseable angle: '" + std::string(text) + "'");
        div = *v;
    }
    return sign * coeff * pi / div;
}

// Run provenance carried at the top of every output file. Comment lines in
// CSV, a separate object in JSON; the record region itself stays
// byte-deterministic for fixed inputs.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::string version = tool_version;
    std::string timestamp;
};

inline std::string utc_timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline RunManifest make_manifest(std::string command,
                                 std::vector<std::pair<std::string, std::string>> params) {
    RunManifest m;
    m.command = std::move(command);
    m.params = std::move(params);
    m.timestamp = utc_timestamp_now();
    return m;
}

inline void write_manifest_comments(std::ostream& os, const RunManifest& m) {
    os << "# command=" << m.command << "\n";
    for (const auto& [key, value] : m.params) os << "# " << key << "=" << value << "\n";
    os << "# version=" << m.version << "\n";
    os << "# generated=" << m.timestamp << "\n";
}

inline nlohmann::ordered_json manifest_json(const RunManifest& m) {
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : m.params) params[key] = value;
    return nlohmann::ordered_json{{"command", m.command},
                                  {"params", std::move(params)},
                                  {"version", m.version},
                                  {"generated", m.timestamp}};
}

struct SimulationRecord {
    int position = 0;
    double probability = 0.0;
    Complex alpha{};
    Complex beta{};
};

struct BoundStateRecord {
    int state = 0;
    double eigenphase = 0.0;
    Complex y{};
    int offset = 0;
    Complex alpha_bar{};
    Complex beta_bar{};
};

struct ScanRecord {
    std::string value;
    double predicted = 0.0;
    std::optional<double> simulated;
    std::optional<double> rel_deviation;
};

inline void write_simulation_csv(std::ostream& os, const RunManifest& m,
                                 std::span<const SimulationRecord> records) {
    write_manifest_comments(os, m);
    os << "position,probability,alpha_re,alpha_im,beta_re,beta_im\n";
    for (const SimulationRecord& r : records) {
        os << format_int(r.position) << ',' << format_double(r.probability) << ','
           << format_double(r.alpha.real()) << ',' << format_double(r.alpha.imag())
           << ',' << format_double(r.beta.real()) << ','
           << format_double(r.beta.imag()) << '\n';
    }
}

inline void write_boundstate_csv(std::ostream& os, const RunManifest& m,
                                 std::span<const BoundStateRecord> records) {
    write_manifest_comments(os, m);
    os << "state,eigenphase,y_re,y_im,offset,alpha_bar_re,alpha_bar_im,alpha_bar_abs,"
          "beta_bar_re,beta_bar_im,beta_bar_abs\n";
    for (const BoundStateRecord& r : records) {
        os << format_int(r.state) << ',' << format_double(r.eigenphase) << ','
           << format_double(r.y.real()) << ',' << format_double(r.y.imag()) << ','
           << format_int(r.offset) << ',' << format_double(r.alpha_bar.real()) << ','
           << format_double(r.alpha_bar.imag()) << ','
           << format_double(std::abs(r.alpha_bar)) << ','
           << format_double(r.beta_bar.real()) << ','
           << format_double(r.beta_bar.imag()) << ','
           << format_double(std::abs(r.beta_bar)) << '\n';
    }
}

inline void write_scan_csv(std::ostream& os, const RunManifest& m,
                           std::span<const ScanRecord> records) {
    write_manifest_comments(os, m);
    os << "value,predicted,simulated,rel_deviation\n";
    for (const ScanRecord& r : records) {
        os << r.value << ',' << format_double(r.predicted) << ',';
        if (r.simulated) os << format_double(*r.simulated);
        os << ',';
        if (r.rel_deviation) os << format_double(*r.rel_deviation);
        os << '\n';
    }
}

inline void write_simulation_json(std::ostream& os, const RunManifest& m,
                                  std::span<const SimulationRecord> records) {
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const SimulationRecord& r : records)
        recs.push_back(nlohmann::ordered_json{{"position", r.position},
                                              {"probability", r.probability},
                                              {"alpha_re", r.alpha.real()},
                                              {"alpha_im", r.alpha.imag()},
                                              {"beta_re", r.beta.real()},
                                              {"beta_im", r.beta.imag()}});
    const nlohmann::ordered_json doc{{"manifest", manifest_json(m)},
                                     {"records", std::move(recs)}};
    os << doc.dump(2) << '\n';
}

inline void write_boundstate_json(std::ostream& os, const RunManifest& m,
                                  std::span<const BoundStateRecord> records) {
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const BoundStateRecord& r : records)
        recs.push_back(nlohmann::ordered_json{{"state", r.state},
                                              {"eigenphase", r.eigenphase},
                                              {"y_re", r.y.real()},
                                              {"y_im", r.y.imag()},
                                              {"offset", r.offset},
                                              {"alpha_bar_re", r.alpha_bar.real()},
                                              {"alpha_bar_im", r.alpha_bar.imag()},
                                              {"alpha_bar_abs", std::abs(r.alpha_bar)},
                                              {"beta_bar_re", r.beta_bar.real()},
                                              {"beta_bar_im", r.beta_bar.imag()},
                                              {"beta_bar_abs", std::abs(r.beta_bar)}});
    const nlohmann::ordered_json doc{{"manifest", manifest_json(m)},
                                     {"records", std::move(recs)}};
    os << doc.dump(2) << '\n';
}

inline void write_scan_json(std::ostream& os, const RunManifest& m,
                            std::span<const ScanRecord> records) {
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const ScanRecord& r : records) {
        nlohmann::ordered_json rec{{"value", r.value}, {"predicted", r.predicted}};
        if (r.simulated) rec["simulated"] = *r.simulated;
        if (r.rel_deviation) rec["rel_deviation"] = *r.rel_deviation;
        recs.push_back(std::move(rec));
    }
    const nlohmann::ordered_json doc{{"manifest", manifest_json(m)},
                                     {"records", std::move(recs)}};
    os << doc.dump(2) << '\n';
}

}  // namespace qwalk
