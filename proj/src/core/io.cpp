#include "core/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/version.hpp"

namespace twolevel {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string hex_u64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::uint64_t parse_hex_u64(const std::string& s) {
    if (s.size() != 16)
        throw IoError("bad checksum field: '" + s + "'");
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(s.c_str(), &end, 16);
    if (end != s.c_str() + s.size())
        throw IoError("bad checksum field: '" + s + "'");
    return v;
}

double parse_double_str(const std::string& s, const char* ctx) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw IoError(std::string("cannot parse number in ") + ctx + ": '" + s + "'");
    return v;
}

int parse_int_str(const std::string& s, const char* ctx) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size())
        throw IoError(std::string("cannot parse integer in ") + ctx + ": '" + s + "'");
    return static_cast<int>(v);
}

std::string kind_tag(ProbabilityKind k) { return k == ProbabilityKind::P1 ? "P1" : "P2"; }

ProbabilityKind parse_kind_tag(const std::string& s) {
    if (s == "P1")
        return ProbabilityKind::P1;
    if (s == "P2")
        return ProbabilityKind::P2;
    throw IoError("unknown probability kind tag: '" + s + "'");
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        lines.push_back(cur);
    return lines;
}

// Leading '# key: value' block; first line must be '# <magic>'.
struct Header {
    std::map<std::string, std::string> kv;
    std::size_t data_line = 0;
};

Header parse_header(const std::vector<std::string>& lines, const std::string& magic) {
    if (lines.empty() || lines[0] != "# " + magic)
        throw IoError("not a " + magic + " document");
    Header h;
    std::size_t i = 1;
    for (; i < lines.size() && !lines[i].empty() && lines[i][0] == '#'; ++i) {
        const std::string& l = lines[i];
        const auto colon = l.find(": ");
        if (l.size() < 3 || colon == std::string::npos)
            throw IoError("malformed metadata line: '" + l + "'");
        h.kv[l.substr(2, colon - 2)] = l.substr(colon + 2);
    }
    h.data_line = i;
    return h;
}

const std::string& hget(const Header& h, const std::string& key) {
    const auto it = h.kv.find(key);
    if (it == h.kv.end())
        throw IoError("metadata is missing '" + key + "'");
    return it->second;
}

void split_csv3(const std::string& line, std::string out[3]) {
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
        const auto comma = line.find(',', start);
        if (k < 2) {
            if (comma == std::string::npos)
                throw IoError("expected 3 comma-separated fields: '" + line + "'");
            out[k] = line.substr(start, comma - start);
            start = comma + 1;
        } else {
            if (comma != std::string::npos)
                throw IoError("expected 3 comma-separated fields: '" + line + "'");
            out[k] = line.substr(start);
        }
    }
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

void append_surface_header(std::ostringstream& os, const Surface& s) {
    os << "# twolevel-surface\n";
    os << "# version: " << s.meta.version << "\n";
    os << "# kind: " << kind_tag(s.meta.kind) << "\n";
    os << "# dimensionless: " << (s.meta.dimensionless ? 1 : 0) << "\n";
    if (!s.meta.dimensionless)
        os << "# omega_rabi_radps: " << format_double(s.meta.omega_rabi) << "\n";
    os << "# x_axis: " << s.meta.x_axis << "\n";
    os << "# y_axis: " << s.meta.y_axis << "\n";
    os << "# convention: " << s.meta.convention << "\n";
    os << "# time_direction: " << s.meta.time_direction << "\n";
    os << "# axis_source: " << s.meta.axis_source << "\n";
    os << "# nx: " << s.nx() << "\n";
    os << "# ny: " << s.ny() << "\n";
    os << "# checksum: " << hex_u64(s.checksum()) << "\n";
}

void read_surface_header(const Header& h, Surface& s, int& nx, int& ny,
                         std::uint64_t& declared_sum) {
    s.meta.version = hget(h, "version");
    s.meta.kind = parse_kind_tag(hget(h, "kind"));
    s.meta.dimensionless = parse_int_str(hget(h, "dimensionless"), "dimensionless") != 0;
    s.meta.omega_rabi =
        s.meta.dimensionless ? 0.0 : parse_double_str(hget(h, "omega_rabi_radps"), "omega_rabi");
    s.meta.x_axis = hget(h, "x_axis");
    s.meta.y_axis = hget(h, "y_axis");
    s.meta.convention = hget(h, "convention");
    s.meta.time_direction = hget(h, "time_direction");
    s.meta.axis_source = hget(h, "axis_source");
    nx = parse_int_str(hget(h, "nx"), "nx");
    ny = parse_int_str(hget(h, "ny"), "ny");
    if (nx < 2 || ny < 2)
        throw IoError("surface document has invalid grid size");
    declared_sum = parse_hex_u64(hget(h, "checksum"));
}

void check_surface_sum(const Surface& s, std::uint64_t declared) {
    if (s.checksum() != declared)
        throw IoError("surface checksum mismatch: data corrupt or edited");
}

std::string export_surface_csv(const Surface& s) {
    std::ostringstream os;
    append_surface_header(os, s);
    os << "x,y,p\n";
    for (int i = 0; i < s.nx(); ++i)
        for (int j = 0; j < s.ny(); ++j)
            os << format_double(s.xs[static_cast<size_t>(i)]) << ','
               << format_double(s.ys[static_cast<size_t>(j)]) << ','
               << format_double(s.value(i, j)) << "\n";
    return os.str();
}

Surface import_surface_csv(const std::string& text) {
    const auto lines = split_lines(text);
    const Header h = parse_header(lines, "twolevel-surface");
    Surface s;
    int nx = 0, ny = 0;
    std::uint64_t declared = 0;
    read_surface_header(h, s, nx, ny, declared);
    std::size_t li = h.data_line;
    if (li >= lines.size() || lines[li] != "x,y,p")
        throw IoError("surface CSV is missing the 'x,y,p' header row");
    ++li;
    if (lines.size() - li < static_cast<size_t>(nx) * ny)
        throw IoError("surface CSV is truncated");
    s.xs.resize(static_cast<size_t>(nx));
    s.ys.resize(static_cast<size_t>(ny));
    s.values.resize(static_cast<size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j, ++li) {
            std::string f[3];
            split_csv3(lines[li], f);
            const double x = parse_double_str(f[0], "x column");
            const double y = parse_double_str(f[1], "y column");
            const double v = parse_double_str(f[2], "p column");
            if (j == 0)
                s.xs[static_cast<size_t>(i)] = x;
            else if (x != s.xs[static_cast<size_t>(i)])
                throw IoError("surface CSV rows are not grid-consistent in x");
            if (i == 0)
                s.ys[static_cast<size_t>(j)] = y;
            else if (y != s.ys[static_cast<size_t>(j)])
                throw IoError("surface CSV rows are not grid-consistent in y");
            s.values[static_cast<size_t>(i) * ny + j] = v;
        }
    }
    check_surface_sum(s, declared);
    return s;
}

std::string export_surface_matrix(const Surface& s) {
    std::ostringstream os;
    append_surface_header(os, s);
    os << s.nx();
    for (int i = 0; i < s.nx(); ++i)
        os << ' ' << format_double(s.xs[static_cast<size_t>(i)]);
    os << "\n";
    for (int j = 0; j < s.ny(); ++j) {
        os << format_double(s.ys[static_cast<size_t>(j)]);
        for (int i = 0; i < s.nx(); ++i)
            os << ' ' << format_double(s.value(i, j));
        os << "\n";
    }
    return os.str();
}

Surface import_surface_matrix(const std::string& text) {
    const auto lines = split_lines(text);
    const Header h = parse_header(lines, "twolevel-surface");
    Surface s;
    int nx = 0, ny = 0;
    std::uint64_t declared = 0;
    read_surface_header(h, s, nx, ny, declared);
    std::size_t li = h.data_line;
    if (lines.size() - li < 1 + static_cast<size_t>(ny))
        throw IoError("surface matrix is truncated");
    auto head = split_ws(lines[li]);
    if (head.size() != static_cast<size_t>(nx) + 1 ||
        parse_int_str(head[0], "matrix corner") != nx)
        throw IoError("surface matrix header row does not match nx");
    s.xs.resize(static_cast<size_t>(nx));
    for (int i = 0; i < nx; ++i)
        s.xs[static_cast<size_t>(i)] = parse_double_str(head[static_cast<size_t>(i) + 1], "x row");
    ++li;
    s.ys.resize(static_cast<size_t>(ny));
    s.values.resize(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j, ++li) {
        auto row = split_ws(lines[li]);
        if (row.size() != static_cast<size_t>(nx) + 1)
            throw IoError("surface matrix row has wrong width");
        s.ys[static_cast<size_t>(j)] = parse_double_str(row[0], "y column");
        for (int i = 0; i < nx; ++i)
            s.values[static_cast<size_t>(i) * ny + j] =
                parse_double_str(row[static_cast<size_t>(i) + 1], "matrix cell");
    }
    check_surface_sum(s, declared);
    return s;
}

std::string export_surface_json(const Surface& s) {
    ordered_json j;
    j["type"] = "twolevel-surface";
    j["version"] = s.meta.version;
    j["kind"] = kind_tag(s.meta.kind);
    j["dimensionless"] = s.meta.dimensionless;
    if (!s.meta.dimensionless)
        j["omega_rabi_radps"] = s.meta.omega_rabi;
    j["x_axis"] = s.meta.x_axis;
    j["y_axis"] = s.meta.y_axis;
    j["convention"] = s.meta.convention;
    j["time_direction"] = s.meta.time_direction;
    j["axis_source"] = s.meta.axis_source;
    j["nx"] = s.nx();
    j["ny"] = s.ny();
    j["x"] = s.xs;
    j["y"] = s.ys;
    j["values"] = s.values;
    j["checksum"] = hex_u64(s.checksum());
    return j.dump(2) + "\n";
}

Surface import_surface_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("surface JSON parse failed: ") + e.what());
    }
    try {
        if (j.at("type").get<std::string>() != "twolevel-surface")
            throw IoError("not a twolevel-surface JSON document");
        Surface s;
        s.meta.version = j.at("version").get<std::string>();
        s.meta.kind = parse_kind_tag(j.at("kind").get<std::string>());
        s.meta.dimensionless = j.at("dimensionless").get<bool>();
        s.meta.omega_rabi =
            s.meta.dimensionless ? 0.0 : j.at("omega_rabi_radps").get<double>();
        s.meta.x_axis = j.at("x_axis").get<std::string>();
        s.meta.y_axis = j.at("y_axis").get<std::string>();
        s.meta.convention = j.at("convention").get<std::string>();
        s.meta.time_direction = j.at("time_direction").get<std::string>();
        s.meta.axis_source = j.at("axis_source").get<std::string>();
        const int nx = j.at("nx").get<int>();
        const int ny = j.at("ny").get<int>();
        s.xs = j.at("x").get<std::vector<double>>();
        s.ys = j.at("y").get<std::vector<double>>();
        s.values = j.at("values").get<std::vector<double>>();
        if (s.xs.size() != static_cast<size_t>(nx) || s.ys.size() != static_cast<size_t>(ny) ||
            s.values.size() != static_cast<size_t>(nx) * ny)
            throw IoError("surface JSON array sizes disagree with nx/ny");
        check_surface_sum(s, parse_hex_u64(j.at("checksum").get<std::string>()));
        return s;
    } catch (const ordered_json::exception& e) {
        throw IoError(std::string("surface JSON structure invalid: ") + e.what());
    }
}

void append_slice_header(std::ostringstream& os, const SpectralSlice& s) {
    os << "# twolevel-slice\n";
    os << "# version: " << kVersion << "\n";
    os << "# kind: " << kind_tag(s.kind) << "\n";
    os << "# omega_rabi_radps: " << format_double(s.omega_rabi) << "\n";
    os << "# tau_s: " << format_double(s.tau) << "\n";
    os << "# n: " << s.detunings.size() << "\n";
    os << "# peaks_computed: " << (s.peaks_computed ? 1 : 0) << "\n";
    if (s.peaks_computed)
        os << "# peak_tol: " << format_double(s.peak_tol) << "\n";
    os << "# checksum: " << hex_u64(s.checksum()) << "\n";
}

void append_slice_peaks(std::ostringstream& os, const SpectralSlice& s) {
    if (!s.peaks_computed)
        return;
    for (double p : s.peaks)
        os << "# peak: " << format_double(p) << "\n";
}

void read_slice_header(const Header& h, SpectralSlice& s, int& n, std::uint64_t& declared) {
    s.kind = parse_kind_tag(hget(h, "kind"));
    s.omega_rabi = parse_double_str(hget(h, "omega_rabi_radps"), "omega_rabi");
    s.tau = parse_double_str(hget(h, "tau_s"), "tau");
    n = parse_int_str(hget(h, "n"), "n");
    if (n < 2)
        throw IoError("slice document has invalid sample count");
    s.peaks_computed = parse_int_str(hget(h, "peaks_computed"), "peaks_computed") != 0;
    if (s.peaks_computed)
        s.peak_tol = parse_double_str(hget(h, "peak_tol"), "peak_tol");
    declared = parse_hex_u64(hget(h, "checksum"));
}

void check_slice_sum(const SpectralSlice& s, std::uint64_t declared) {
    if (s.checksum() != declared)
        throw IoError("slice checksum mismatch: data corrupt or edited");
}

void read_slice_peak_lines(const std::vector<std::string>& lines, std::size_t li,
                           SpectralSlice& s) {
    for (; li < lines.size(); ++li) {
        if (lines[li].empty())
            continue;
        if (lines[li].rfind("# peak: ", 0) != 0)
            throw IoError("unexpected trailing line in slice document: '" + lines[li] + "'");
        s.peaks.push_back(parse_double_str(lines[li].substr(8), "peak"));
    }
}

std::string export_slice_csv(const SpectralSlice& s) {
    std::ostringstream os;
    append_slice_header(os, s);
    os << "detuning_radps,p\n";
    for (std::size_t j = 0; j < s.detunings.size(); ++j)
        os << format_double(s.detunings[j]) << ',' << format_double(s.values[j]) << "\n";
    append_slice_peaks(os, s);
    return os.str();
}

SpectralSlice import_slice_csv(const std::string& text) {
    const auto lines = split_lines(text);
    const Header h = parse_header(lines, "twolevel-slice");
    SpectralSlice s;
    int n = 0;
    std::uint64_t declared = 0;
    read_slice_header(h, s, n, declared);
    std::size_t li = h.data_line;
    if (li >= lines.size() || lines[li] != "detuning_radps,p")
        throw IoError("slice CSV is missing the 'detuning_radps,p' header row");
    ++li;
    if (lines.size() - li < static_cast<size_t>(n))
        throw IoError("slice CSV is truncated");
    s.detunings.resize(static_cast<size_t>(n));
    s.values.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j, ++li) {
        const auto comma = lines[li].find(',');
        if (comma == std::string::npos)
            throw IoError("slice CSV record needs 2 fields: '" + lines[li] + "'");
        s.detunings[static_cast<size_t>(j)] =
            parse_double_str(lines[li].substr(0, comma), "detuning column");
        s.values[static_cast<size_t>(j)] =
            parse_double_str(lines[li].substr(comma + 1), "p column");
    }
    read_slice_peak_lines(lines, li, s);
    check_slice_sum(s, declared);
    return s;
}

std::string export_slice_matrix(const SpectralSlice& s) {
    std::ostringstream os;
    append_slice_header(os, s);
    for (std::size_t j = 0; j < s.detunings.size(); ++j)
        os << format_double(s.detunings[j]) << ' ' << format_double(s.values[j]) << "\n";
    append_slice_peaks(os, s);
    return os.str();
}

SpectralSlice import_slice_matrix(const std::string& text) {
    const auto lines = split_lines(text);
    const Header h = parse_header(lines, "twolevel-slice");
    SpectralSlice s;
    int n = 0;
    std::uint64_t declared = 0;
    read_slice_header(h, s, n, declared);
    std::size_t li = h.data_line;
    if (lines.size() - li < static_cast<size_t>(n))
        throw IoError("slice matrix is truncated");
    s.detunings.resize(static_cast<size_t>(n));
    s.values.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j, ++li) {
        const auto toks = split_ws(lines[li]);
        if (toks.size() != 2)
            throw IoError("slice matrix record needs 2 fields: '" + lines[li] + "'");
        s.detunings[static_cast<size_t>(j)] = parse_double_str(toks[0], "detuning column");
        s.values[static_cast<size_t>(j)] = parse_double_str(toks[1], "p column");
    }
    read_slice_peak_lines(lines, li, s);
    check_slice_sum(s, declared);
    return s;
}

std::string export_slice_json(const SpectralSlice& s) {
    ordered_json j;
    j["type"] = "twolevel-slice";
    j["version"] = kVersion;
    j["kind"] = kind_tag(s.kind);
    j["omega_rabi_radps"] = s.omega_rabi;
    j["tau_s"] = s.tau;
    j["n"] = s.detunings.size();
    j["peaks_computed"] = s.peaks_computed;
    if (s.peaks_computed) {
        j["peak_tol"] = s.peak_tol;
        j["peaks"] = s.peaks;
    }
    j["detunings"] = s.detunings;
    j["values"] = s.values;
    j["checksum"] = hex_u64(s.checksum());
    return j.dump(2) + "\n";
}

SpectralSlice import_slice_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("slice JSON parse failed: ") + e.what());
    }
    try {
        if (j.at("type").get<std::string>() != "twolevel-slice")
            throw IoError("not a twolevel-slice JSON document");
        SpectralSlice s;
        s.kind = parse_kind_tag(j.at("kind").get<std::string>());
        s.omega_rabi = j.at("omega_rabi_radps").get<double>();
        s.tau = j.at("tau_s").get<double>();
        const int n = j.at("n").get<int>();
        s.peaks_computed = j.at("peaks_computed").get<bool>();
        if (s.peaks_computed) {
            s.peak_tol = j.at("peak_tol").get<double>();
            s.peaks = j.at("peaks").get<std::vector<double>>();
        }
        s.detunings = j.at("detunings").get<std::vector<double>>();
        s.values = j.at("values").get<std::vector<double>>();
        if (s.detunings.size() != static_cast<size_t>(n) || s.values.size() != static_cast<size_t>(n))
            throw IoError("slice JSON array sizes disagree with n");
        check_slice_sum(s, parse_hex_u64(j.at("checksum").get<std::string>()));
        return s;
    } catch (const ordered_json::exception& e) {
        throw IoError(std::string("slice JSON structure invalid: ") + e.what());
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out)
        throw IoError("write failed: " + path);
}

} // namespace

ExportFormat parse_format(const std::string& name) {
    if (name == "csv")
        return ExportFormat::Csv;
    if (name == "json")
        return ExportFormat::Json;
    if (name == "matrix")
        return ExportFormat::Matrix;
    throw UsageError("unknown export format '" + name + "' (use csv, json or matrix)");
}

std::string format_name(ExportFormat f) {
    switch (f) {
    case ExportFormat::Csv:
        return "csv";
    case ExportFormat::Json:
        return "json";
    case ExportFormat::Matrix:
        return "matrix";
    }
    throw UsageError("invalid export format value");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string export_surface(const Surface& s, ExportFormat f) {
    switch (f) {
    case ExportFormat::Csv:
        return export_surface_csv(s);
    case ExportFormat::Json:
        return export_surface_json(s);
    case ExportFormat::Matrix:
        return export_surface_matrix(s);
    }
    throw UsageError("invalid export format value");
}

Surface import_surface(const std::string& text, ExportFormat f) {
    switch (f) {
    case ExportFormat::Csv:
        return import_surface_csv(text);
    case ExportFormat::Json:
        return import_surface_json(text);
    case ExportFormat::Matrix:
        return import_surface_matrix(text);
    }
    throw UsageError("invalid export format value");
}

void write_surface_file(const Surface& s, const std::string& path, ExportFormat f) {
    spit(path, export_surface(s, f));
}

Surface read_surface_file(const std::string& path, ExportFormat f) {
    return import_surface(slurp(path), f);
}

std::string export_slice(const SpectralSlice& s, ExportFormat f) {
    switch (f) {
    case ExportFormat::Csv:
        return export_slice_csv(s);
    case ExportFormat::Json:
        return export_slice_json(s);
    case ExportFormat::Matrix:
        return export_slice_matrix(s);
    }
    throw UsageError("invalid export format value");
}

SpectralSlice import_slice(const std::string& text, ExportFormat f) {
    switch (f) {
    case ExportFormat::Csv:
        return import_slice_csv(text);
    case ExportFormat::Json:
        return import_slice_json(text);
    case ExportFormat::Matrix:
        return import_slice_matrix(text);
    }
    throw UsageError("invalid export format value");
}

void write_slice_file(const SpectralSlice& s, const std::string& path, ExportFormat f) {
    spit(path, export_slice(s, f));
}

SpectralSlice read_slice_file(const std::string& path, ExportFormat f) {
    return import_slice(slurp(path), f);
}

} // namespace twolevel
