#include "lsdnet/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "lsdnet/errors.hpp"

namespace lsdnet {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_double_sig9(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return std::string(buf);
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw BadFile("cannot open for writing: " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw BadFile("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw BadFile("rename failed: " + tmp.string() + " -> " + path.string() +
                      " (" + ec.message() + ")");
    }
}

namespace {

double parse_double_field(const std::string& text, const std::filesystem::path& path, int line) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw BadFile(path.string() + ":" + std::to_string(line) +
                      ": not a number: '" + text + "'");
    }
    return value;
}

}  // namespace

SensorField read_sensor_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw BadFile("cannot open: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw BadFile(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "sensor_id,x,y") {
        throw BadFile(path.string() + ": expected header 'sensor_id,x,y', got '" + line + "'");
    }
    SensorField field;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string id_text, x_text, y_text, extra;
        if (!std::getline(row, id_text, ',') || !std::getline(row, x_text, ',') ||
            !std::getline(row, y_text, ',')) {
            throw BadFile(path.string() + ":" + std::to_string(line_no) +
                          ": expected 'sensor_id,x,y' row, got '" + line + "'");
        }
        if (std::getline(row, extra, ',')) {
            throw BadFile(path.string() + ":" + std::to_string(line_no) +
                          ": too many fields: '" + line + "'");
        }
        field.coords.push_back(Point{parse_double_field(x_text, path, line_no),
                                     parse_double_field(y_text, path, line_no)});
    }
    return field;
}

void write_sensor_csv(const std::filesystem::path& path, const SensorField& field) {
    std::string content = "sensor_id,x,y\n";
    for (std::size_t i = 0; i < field.coords.size(); ++i) {
        content += std::to_string(i);
        content += ',';
        content += format_double(field.coords[i].x);
        content += ',';
        content += format_double(field.coords[i].y);
        content += '\n';
    }
    atomic_write_text(path, content);
}

}  // namespace lsdnet
