#include "stomo/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <system_error>

#include "json_util.hpp"

namespace stomo {
namespace {

using nlohmann::json;

constexpr std::array<unsigned char, 8> kMagic = {'S', 'T', 'O', 'M', 'O', 0, 0, 1};

void append_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void ensure_parent(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
}

void write_container(const std::filesystem::path& path, const json& header,
                     const std::vector<double>& payload) {
    std::string bytes;
    bytes.reserve(64 + payload.size() * 8);
    bytes.append(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
    std::string head = header.dump();
    auto hlen = static_cast<std::uint32_t>(head.size());
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((hlen >> (8 * i)) & 0xff));
    bytes += head;
    for (double v : payload) append_u64_le(bytes, std::bit_cast<std::uint64_t>(v));

    ensure_parent(path);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed: " + path.string());
}

struct Container {
    json header;
    std::vector<double> payload;
};

Container read_container(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw IoError("read failed: " + path.string());

    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < kMagic.size() + 4 ||
        std::memcmp(p, kMagic.data(), kMagic.size()) != 0)
        throw IoError("not a valid container (bad magic): " + path.string());
    std::uint32_t hlen = 0;
    for (int i = 0; i < 4; ++i)
        hlen |= static_cast<std::uint32_t>(p[kMagic.size() + i]) << (8 * i);
    std::size_t off = kMagic.size() + 4;
    if (hlen > (1u << 20) || off + hlen > bytes.size())
        throw IoError("corrupt container header: " + path.string());

    Container c;
    try {
        c.header = json::parse(bytes.substr(off, hlen));
    } catch (const json::exception& e) {
        throw IoError("corrupt container header (" + std::string(e.what()) + "): " +
                      path.string());
    }
    off += hlen;
    std::size_t remaining = bytes.size() - off;
    if (remaining % 8 != 0) throw IoError("truncated payload: " + path.string());
    c.payload.resize(remaining / 8);
    for (std::size_t i = 0; i < c.payload.size(); ++i) {
        std::uint64_t u = 0;
        for (int b = 0; b < 8; ++b)
            u |= static_cast<std::uint64_t>(p[off + i * 8 + b]) << (8 * b);
        c.payload[i] = std::bit_cast<double>(u);
    }
    return c;
}

json require(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw IoError(where + ": missing key '" + key + "'");
    return j.at(key);
}

std::array<double, 3> triple(const json& j, const char* key, const std::string& where) {
    json v = require(j, key, where);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number())
        throw IoError(where + ": '" + key + "' must be a 3-element numeric array");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void check_dtype(const json& header, const std::string& where) {
    if (require(header, "dtype", where).get<std::string>() != "f64")
        throw IoError(where + ": unsupported dtype (expected f64)");
}

} // namespace

std::string fmt_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw ArgumentError("fmt_double: formatting failed");
    return std::string(buf, end);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size())
        throw ArgumentError("parse_double: malformed number '" + std::string(s) + "'");
    return v;
}

nlohmann::json geometry_to_json(const ScanGeometry& g) {
    json j;
    j["angles"] = g.angles;
    j["n_p"] = g.n_p;
    j["detector_spacing"] = g.detector_spacing;
    if (g.kind == ScanGeometry::Kind::Parallel2D) {
        j["kind"] = "parallel2d";
    } else {
        j["kind"] = "conebeam3d";
        j["detector_rows"] = g.detector_rows;
        j["detector_cols"] = g.detector_cols;
        j["source_distance"] = g.source_distance;
        j["detector_distance"] = g.detector_distance;
    }
    return j;
}

ScanGeometry geometry_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": geometry must be an object");
    auto need = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
        return j.at(key);
    };
    std::string kind = need("kind").get<std::string>();
    std::vector<double> angles = need("angles").get<std::vector<double>>();
    double spacing = need("detector_spacing").get<double>();
    try {
        if (kind == "parallel2d") {
            reject_unknown_keys(j, {"kind", "angles", "n_p", "detector_spacing"}, where);
            return ScanGeometry::parallel2d(std::move(angles), need("n_p").get<int>(), spacing);
        }
        if (kind == "conebeam3d") {
            reject_unknown_keys(j,
                                {"kind", "angles", "n_p", "detector_spacing", "detector_rows",
                                 "detector_cols", "source_distance", "detector_distance"},
                                where);
            ScanGeometry g = ScanGeometry::conebeam3d(
                std::move(angles), need("detector_rows").get<int>(),
                need("detector_cols").get<int>(), spacing, need("source_distance").get<double>(),
                need("detector_distance").get<double>());
            if (j.contains("n_p") && j.at("n_p").get<int>() != g.n_p)
                throw ConfigError(where + ": n_p does not match detector_rows * detector_cols");
            return g;
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": unknown geometry kind '" + kind + "'");
}

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

void write_image(const std::filesystem::path& path, const ImageGrid& img) {
    img.validate();
    json h;
    h["kind"] = "image";
    h["dtype"] = "f64";
    h["dims"] = img.dims;
    h["voxel_size"] = img.voxel_size;
    h["origin"] = img.origin;
    write_container(path, h, img.values);
}

ImageGrid read_image(const std::filesystem::path& path) {
    Container c = read_container(path);
    const std::string where = "image " + path.string();
    if (require(c.header, "kind", where).get<std::string>() != "image")
        throw IoError(where + ": container does not hold an image");
    check_dtype(c.header, where);
    json d = require(c.header, "dims", where);
    if (!d.is_array() || d.size() != 3) throw IoError(where + ": bad dims");
    ImageGrid img;
    img.dims = {d[0].get<int>(), d[1].get<int>(), d[2].get<int>()};
    img.voxel_size = triple(c.header, "voxel_size", where);
    img.origin = triple(c.header, "origin", where);
    img.values = std::move(c.payload);
    try {
        img.validate();
    } catch (const ArgumentError& e) {
        throw IoError(where + ": " + e.what());
    }
    return img;
}

void write_sinogram(const std::filesystem::path& path, const Sinogram& sino) {
    sino.validate();
    json h;
    h["kind"] = "sinogram";
    h["dtype"] = "f64";
    h["geometry"] = geometry_to_json(sino.geometry);
    write_container(path, h, sino.values);
}

Sinogram read_sinogram(const std::filesystem::path& path) {
    Container c = read_container(path);
    const std::string where = "sinogram " + path.string();
    if (require(c.header, "kind", where).get<std::string>() != "sinogram")
        throw IoError(where + ": container does not hold a sinogram");
    check_dtype(c.header, where);
    Sinogram s;
    try {
        s.geometry = geometry_from_json(require(c.header, "geometry", where), where);
    } catch (const ConfigError& e) {
        throw IoError(e.what());
    }
    s.values = std::move(c.payload);
    try {
        s.validate();
    } catch (const ArgumentError& e) {
        throw IoError(where + ": " + e.what());
    }
    return s;
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<IterationRecord>& trace) {
    std::string out =
        "k,t,batch_size,alpha_accepted,backtracks,sub_objective,full_objective,"
        "grad_map_norm,elapsed_s\n";
    for (const auto& r : trace) {
        out += std::to_string(r.k);
        out += ',';
        out += std::to_string(r.t);
        out += ',';
        out += std::to_string(r.batch_size);
        out += ',';
        out += fmt_double(r.alpha_accepted);
        out += ',';
        out += std::to_string(r.backtracks);
        out += ',';
        out += fmt_double(r.sub_objective);
        out += ',';
        if (r.full_objective) out += fmt_double(*r.full_objective);
        out += ',';
        out += fmt_double(r.grad_map_norm);
        out += ',';
        out += fmt_double(r.elapsed);
        out += '\n';
    }
    write_text_file(path, out);
}

std::string metrics_to_csv(const MetricsReport& r) {
    return "re,psnr_db,ssim\n" + fmt_double(r.re) + "," + fmt_double(r.psnr_db) + "," +
           fmt_double(r.ssim_val) + "\n";
}

MetricsReport metrics_from_csv(const std::string& text) {
    auto fail = [](const std::string& why) {
        throw ArgumentError("metrics_from_csv: " + why);
    };
    std::size_t eol = text.find('\n');
    if (eol == std::string::npos) fail("missing header line");
    if (text.substr(0, eol) != "re,psnr_db,ssim") fail("unexpected header");
    std::size_t end = text.find('\n', eol + 1);
    std::string row = text.substr(eol + 1, end == std::string::npos ? end : end - eol - 1);
    std::size_t c1 = row.find(',');
    std::size_t c2 = row.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) fail("row needs three cells");
    MetricsReport r;
    r.re = parse_double(std::string_view(row).substr(0, c1));
    r.psnr_db = parse_double(std::string_view(row).substr(c1 + 1, c2 - c1 - 1));
    r.ssim_val = parse_double(std::string_view(row).substr(c2 + 1));
    return r;
}

std::string metrics_to_text(const MetricsReport& r) {
    return "re = " + fmt_double(r.re) + "\npsnr_db = " + fmt_double(r.psnr_db) +
           "\nssim = " + fmt_double(r.ssim_val) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    ensure_parent(path);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError("write failed: " + path.string());
}

} // namespace stomo
