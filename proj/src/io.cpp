#include "io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "binio.hpp"
#include "errors.hpp"

namespace tsc {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(line.substr(start));
            return parts;
        }
        parts.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    size_t start = 0;
    while (start < text.size()) {
        size_t pos = text.find('\n', start);
        size_t end = (pos == std::string::npos) ? text.size() : pos;
        size_t len = end - start;
        if (len > 0 && text[start + len - 1] == '\r') --len;
        lines.push_back(text.substr(start, len));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return lines;
}

Dataset load_csv(const std::filesystem::path& path) {
    std::string text = read_file(path);
    std::vector<std::string> lines = split_lines(text);
    // Drop trailing blank lines but keep interior structure strict.
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) fail_format(path.string() + ": empty file");

    std::vector<std::string> header = split(lines[0], ',');
    if (header.size() != 3)
        fail_format(path.string() + ": header must be 'channels,length,sampling_rate'");
    int channels = parse_int(header[0]);
    int length = parse_int(header[1]);
    double rate = parse_double(header[2]);
    if (channels < 1 || length < 2 || !(rate > 0))
        fail_format(path.string() + ": bad header values");

    size_t per_record = 1 + size_t(channels);
    if ((lines.size() - 1) % per_record != 0)
        fail_format(path.string() + ": line count does not form whole records");
    size_t count = (lines.size() - 1) / per_record;
    if (count == 0) fail_format(path.string() + ": no records");

    Dataset ds;
    ds.records.reserve(count);
    for (size_t r = 0; r < count; ++r) {
        size_t base = 1 + r * per_record;
        std::string rec_name = "record " + std::to_string(r);
        const std::string& head = lines[base];
        size_t comma = head.rfind(',');
        if (comma == std::string::npos)
            fail_format(path.string() + ": " + rec_name + ": expected 'id,label' line");
        Record rec;
        rec.id = head.substr(0, comma);
        rec.label = label_from_string(head.substr(comma + 1));
        rec.channels = channels;
        rec.length = length;
        rec.sampling_rate = rate;
        rec.samples.resize(size_t(channels) * length);
        for (int c = 0; c < channels; ++c) {
            std::vector<std::string> cells = split(lines[base + 1 + c], ',');
            if (cells.size() != size_t(length))
                fail_format(path.string() + ": " + rec_name + ": channel " + std::to_string(c) +
                            " has " + std::to_string(cells.size()) + " values, expected " +
                            std::to_string(length));
            for (int i = 0; i < length; ++i) {
                double v = parse_double(cells[i]);
                if (!std::isfinite(v))
                    fail_format(path.string() + ": " + rec_name + ": non-finite sample");
                rec.at(c, i) = v;
            }
        }
        ds.records.push_back(std::move(rec));
    }
    ds.validate();
    return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::string out;
    out += std::to_string(ds.channels()) + "," + std::to_string(ds.length()) + "," +
           format_double(ds.sampling_rate()) + "\n";
    for (const Record& rec : ds.records) {
        out += rec.id + "," + to_string(rec.label) + "\n";
        for (int c = 0; c < rec.channels; ++c) {
            for (int i = 0; i < rec.length; ++i) {
                if (i) out += ',';
                out += format_double(rec.at(c, i));
            }
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

constexpr char kMagic[4] = {'T', 'S', 'C', '1'};
constexpr size_t kRawHeaderBytes = 4 + 4 * 4;

Dataset load_raw(const std::filesystem::path& path) {
    std::string text = read_file(path);
    const unsigned char* p = reinterpret_cast<const unsigned char*>(text.data());
    if (text.size() < kRawHeaderBytes || std::memcmp(text.data(), kMagic, 4) != 0)
        fail_format(path.string() + ": not a TSC1 file");
    uint32_t count = get_u32_le(p + 4);
    uint32_t channels = get_u32_le(p + 8);
    uint32_t length = get_u32_le(p + 12);
    uint32_t millihertz = get_u32_le(p + 16);
    if (count == 0 || channels == 0 || length < 2 || millihertz == 0)
        fail_format(path.string() + ": bad header values");
    size_t record_bytes = 1 + size_t(channels) * length * 4;
    if (text.size() != kRawHeaderBytes + size_t(count) * record_bytes)
        fail_format(path.string() + ": payload size does not match header");

    Dataset ds;
    ds.records.reserve(count);
    const unsigned char* cur = p + kRawHeaderBytes;
    for (uint32_t r = 0; r < count; ++r) {
        Record rec;
        rec.id = "rec" + std::to_string(r);
        rec.channels = int(channels);
        rec.length = int(length);
        rec.sampling_rate = millihertz / 1000.0;
        uint8_t lab = *cur++;
        if (lab > 2)
            fail_format(path.string() + ": record " + std::to_string(r) + ": bad label byte");
        rec.label = Label(lab);
        rec.samples.resize(size_t(channels) * length);
        for (size_t i = 0; i < rec.samples.size(); ++i, cur += 4) {
            double v = get_f32_le(cur);
            if (!std::isfinite(v))
                fail_format(path.string() + ": record " + std::to_string(r) +
                            ": non-finite sample");
            rec.samples[i] = v;
        }
        ds.records.push_back(std::move(rec));
    }
    ds.validate();
    return ds;
}

void save_raw(const Dataset& ds, const std::filesystem::path& path) {
    ds.validate();
    std::string out;
    out.reserve(kRawHeaderBytes +
                ds.records.size() * (1 + size_t(ds.channels()) * ds.length() * 4));
    out.append(kMagic, 4);
    put_u32_le(out, uint32_t(ds.count()));
    put_u32_le(out, uint32_t(ds.channels()));
    put_u32_le(out, uint32_t(ds.length()));
    double mhz = std::round(ds.sampling_rate() * 1000.0);
    if (!(mhz >= 1 && mhz <= double(UINT32_MAX)))
        fail_invalid("sampling rate not representable in millihertz");
    put_u32_le(out, uint32_t(mhz));
    for (const Record& rec : ds.records) {
        out.push_back(char(uint8_t(rec.label)));
        for (double v : rec.samples) put_f32_le(out, float(v));
    }
    write_file_atomic(path, out);
}

}  // namespace

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "raw" || name == "rawf32") return Format::RawF32;
    fail_invalid("unknown format '" + name + "' (expected csv or raw)");
}

Format detect_format(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? Format::Csv : Format::RawF32;
}

Dataset load_dataset(const std::filesystem::path& path, Format format) {
    return format == Format::Csv ? load_csv(path) : load_raw(path);
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path, Format format) {
    if (format == Format::Csv)
        save_csv(dataset, path);
    else
        save_raw(dataset, path);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail_io("cannot open '" + tmp.string() + "' for writing");
        out.write(contents.data(), std::streamsize(contents.size()));
        out.flush();
        if (!out) fail_io("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail_io("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) fail_io("read failed for '" + path.string() + "'");
    return std::move(buf).str();
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double v = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        fail_format("cannot parse '" + text + "' as a number");
    return v;
}

int parse_int(const std::string& text) {
    int v = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        fail_format("cannot parse '" + text + "' as an integer");
    return v;
}

}  // namespace tsc
