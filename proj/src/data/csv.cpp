#include "regime/data/csv.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace regime::data {

namespace {

constexpr std::int64_t kStep = 300;

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097LL + static_cast<std::int64_t>(doe) - 719468LL;
}

}  // namespace

std::int64_t parse_iso8601(const std::string& text) {
    int y, mo, d, h, mi, s = 0;
    char sep;
    const int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n < 6 || (sep != 'T' && sep != ' '))
        throw CsvError("bad ISO-8601 timestamp: " + text);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 ||
        s > 60)
        throw CsvError("timestamp out of range: " + text);
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(std::int64_t t) {
    std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::string LoadReport::to_json() const {
    nlohmann::json j;
    j["rows_read"] = rows_read;
    j["gaps_interpolated"] = gaps_interpolated;
    j["segments_dropped"] = segments_dropped;
    j["rows_dropped"] = rows_dropped;
    j["retained_start"] = format_iso8601(retained_start);
    j["retained_end"] = format_iso8601(retained_end);
    return j.dump(2);
}

SeriesBundle load_flow_csv(const std::string& path, LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw CsvError("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,flow")
        throw CsvError("expected header 'timestamp,flow', got '" + line + "'");

    std::vector<std::int64_t> ts;
    std::vector<double> flow;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw CsvError("line " + std::to_string(line_no) + ": missing comma");
        std::int64_t t;
        try {
            t = parse_iso8601(line.substr(0, comma));
        } catch (const CsvError&) {
            throw CsvError("line " + std::to_string(line_no) + ": bad timestamp");
        }
        const std::string value = line.substr(comma + 1);
        double f;
        const auto res = std::from_chars(value.data(), value.data() + value.size(), f);
        if (res.ec != std::errc() || res.ptr != value.data() + value.size())
            throw CsvError("line " + std::to_string(line_no) + ": non-numeric flow '" + value + "'");
        if (!ts.empty() && t <= ts.back())
            throw CsvError("line " + std::to_string(line_no) + ": non-monotone timestamp");
        ts.push_back(t);
        flow.push_back(f);
    }
    if (ts.size() < 2) throw CsvError("file has fewer than 2 data rows: " + path);

    LoadReport rep;
    rep.rows_read = ts.size();

    // Walk the series filling short gaps; cut at long or irregular gaps.
    std::vector<std::vector<std::int64_t>> seg_ts(1);
    std::vector<std::vector<double>> seg_flow(1);
    seg_ts.back().push_back(ts[0]);
    seg_flow.back().push_back(flow[0]);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const std::int64_t gap = ts[i] - ts[i - 1];
        if (gap == kStep) {
            seg_ts.back().push_back(ts[i]);
            seg_flow.back().push_back(flow[i]);
        } else if (gap % kStep == 0 && gap / kStep <= 4) {
            const std::int64_t missing = gap / kStep - 1;
            const double prev = seg_flow.back().back();
            for (std::int64_t g = 1; g <= missing; ++g) {
                const double frac = static_cast<double>(g) / (missing + 1);
                seg_ts.back().push_back(ts[i - 1] + g * kStep);
                seg_flow.back().push_back(prev + frac * (flow[i] - prev));
                ++rep.gaps_interpolated;
            }
            seg_ts.back().push_back(ts[i]);
            seg_flow.back().push_back(flow[i]);
        } else {
            seg_ts.emplace_back();
            seg_flow.emplace_back();
            seg_ts.back().push_back(ts[i]);
            seg_flow.back().push_back(flow[i]);
        }
    }
    std::size_t best = 0;
    for (std::size_t s = 1; s < seg_ts.size(); ++s)
        if (seg_ts[s].size() > seg_ts[best].size()) best = s;
    rep.segments_dropped = seg_ts.size() - 1;
    for (std::size_t s = 0; s < seg_ts.size(); ++s)
        if (s != best) rep.rows_dropped += seg_ts[s].size();
    if (seg_ts[best].size() < 2)
        throw CsvError("no contiguous 5-minute segment of length >= 2 in " + path);
    rep.retained_start = seg_ts[best].front();
    rep.retained_end = seg_ts[best].back();
    if (report) *report = rep;
    return make_bundle(std::move(seg_ts[best]), std::move(seg_flow[best]));
}

void write_flow_csv(const std::string& path, const SeriesBundle& bundle) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot open for writing: " + path);
    out << "timestamp,flow\n";
    char buf[64];
    for (std::size_t i = 0; i < bundle.flow.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", bundle.flow[i]);
        out << format_iso8601(bundle.timestamps[i]) << ',' << buf << '\n';
    }
}

}  // namespace regime::data
