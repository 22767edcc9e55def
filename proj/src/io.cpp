#include "ufdn/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ufdn {

namespace {

[[noreturn]] void schema_error(std::string_view source, const std::string& where, const std::string& what) {
    std::ostringstream msg;
    msg << source << ": " << (where.empty() ? "/" : where) << ": " << what;
    throw ParseError(msg.str());
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

double number_at(const Json& j, std::string_view source, const std::string& where) {
    if (!j.is_number()) schema_error(source, where, "expected a number");
    return j.get<double>();
}

Matrix matrix_from(const Json& j, std::string_view source, const std::string& where) {
    if (!j.is_array()) schema_error(source, where, "expected a 2-D array");
    const auto rows = static_cast<Index>(j.size());
    Index cols = -1;
    Matrix m;
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        const std::string at = where + "/" + std::to_string(i);
        if (!row.is_array()) schema_error(source, at, "expected an array row");
        if (cols < 0) {
            cols = static_cast<Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Index>(row.size()) != cols) {
            schema_error(source, at, "ragged matrix row");
        }
        for (Index c = 0; c < cols; ++c) {
            m(i, c) = number_at(row[static_cast<std::size_t>(c)], source, at + "/" + std::to_string(c));
        }
    }
    if (rows == 0 || cols <= 0) schema_error(source, where, "matrix is empty");
    return m;
}

Json parse_json(std::string_view text, std::string_view source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // Translate the byte offset into line and column.
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream msg;
        msg << source << ":" << line << ":" << column << ": malformed JSON (" << e.what() << ")";
        throw ParseError(msg.str());
    }
}

bool is_scalar_array(const Json& j) {
    for (const auto& e : j) {
        if (e.is_array() || e.is_object()) return false;
    }
    return true;
}

void dump_into(std::string& out, const Json& j, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(it.key()).dump() + ": ";
                dump_into(out, it.value(), depth + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (is_scalar_array(j)) {
                out += "[";
                for (std::size_t k = 0; k < j.size(); ++k) {
                    if (k) out += ", ";
                    dump_into(out, j[k], depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ",\n";
                out += pad;
                dump_into(out, j[k], depth + 1);
            }
            out += "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

void put_le(std::ostream& out, std::uint32_t v, int bytes) {
    for (int k = 0; k < bytes; ++k) out.put(static_cast<char>((v >> (8 * k)) & 0xffu));
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) throw DomainError("non-finite value cannot be written as JSON");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string canonical_dump(const Json& j) {
    std::string out;
    dump_into(out, j, 0);
    out += "\n";
    return out;
}

Json to_json(const FdnDocument& doc) {
    const FdnSystem& s = doc.system;
    Json j = doc.extras.is_object() ? doc.extras : Json::object();
    j["version"] = kSchemaVersion;
    j["delays"] = s.delays().values();
    j["A"] = matrix_json(s.a());
    j["B"] = matrix_json(s.b());
    j["C"] = matrix_json(s.c());
    j["D"] = matrix_json(s.d());
    if (s.dsim()) j["dsim"] = std::vector<double>(s.dsim()->d.data(), s.dsim()->d.data() + s.dsim()->d.size());
    if (!doc.meta.is_null()) j["meta"] = doc.meta;
    if (!doc.verify.is_null()) j["verify"] = doc.verify;
    return j;
}

FdnDocument from_json(const Json& j) {
    return parse_document(j.dump(), "<json>");
}

std::string serialize(const FdnDocument& doc) {
    return canonical_dump(to_json(doc));
}

FdnDocument parse_document(std::string_view text, std::string_view source) {
    const Json j = parse_json(text, source);
    if (!j.is_object()) schema_error(source, "", "expected a JSON object");
    if (!j.contains("version")) schema_error(source, "/version", "schema version field is missing");
    if (!j["version"].is_number_integer() || j["version"].get<long>() != kSchemaVersion) {
        schema_error(source, "/version", "unknown schema version " + j["version"].dump());
    }
    for (const char* key : {"delays", "A", "B", "C", "D"}) {
        if (!j.contains(key)) schema_error(source, std::string("/") + key, "required field is missing");
    }

    const Json& dj = j["delays"];
    if (!dj.is_array() || dj.empty()) schema_error(source, "/delays", "expected a non-empty integer array");
    std::vector<int> lengths;
    for (std::size_t k = 0; k < dj.size(); ++k) {
        if (!dj[k].is_number_integer()) schema_error(source, "/delays/" + std::to_string(k), "expected an integer");
        lengths.push_back(dj[k].get<int>());
    }
    DelayVector delays = [&] {
        try {
            return DelayVector(std::move(lengths));
        } catch (const DomainError& e) {
            schema_error(source, "/delays", e.what());
        }
    }();

    std::optional<DiagonalSimilarity> dsim;
    if (j.contains("dsim") && !j["dsim"].is_null()) {
        const Json& sj = j["dsim"];
        if (!sj.is_array()) schema_error(source, "/dsim", "expected a number array");
        Vector d(static_cast<Index>(sj.size()));
        for (std::size_t k = 0; k < sj.size(); ++k) d(static_cast<Index>(k)) = number_at(sj[k], source, "/dsim/" + std::to_string(k));
        dsim = DiagonalSimilarity{d};
    }

    FdnSystem system(matrix_from(j["A"], source, "/A"), matrix_from(j["B"], source, "/B"),
                     matrix_from(j["C"], source, "/C"), matrix_from(j["D"], source, "/D"), std::move(delays),
                     std::move(dsim));
    FdnDocument doc{std::move(system), Json(), Json(), Json::object()};
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "meta") {
            doc.meta = it.value();
        } else if (key == "verify") {
            doc.verify = it.value();
        } else if (key != "version" && key != "delays" && key != "A" && key != "B" && key != "C" && key != "D" &&
                   key != "dsim") {
            doc.extras[key] = it.value();
        }
    }
    return doc;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path.string() + ": cannot open file for writing");
    out << text;
    if (!out) throw Error(path.string() + ": write failed");
}

FdnDocument load_document(const std::filesystem::path& path) {
    return parse_document(read_text(path), path.string());
}

void save_document(const FdnDocument& doc, const std::filesystem::path& path) {
    write_text(path, serialize(doc));
}

Matrix parse_matrix(std::string_view text, std::string_view source) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) schema_error(source, "", "matrix input is empty");
    if (text[first] == '[' || text[first] == '{') {
        const Json j = parse_json(text, source);
        if (j.is_object()) {
            if (!j.contains("A")) schema_error(source, "/A", "object has no feedback matrix field");
            return matrix_from(j["A"], source, "/A");
        }
        return matrix_from(j, source, "");
    }

    std::vector<std::vector<double>> rows;
    std::istringstream lines{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r,;") == std::string::npos) continue;
        for (char& ch : line) {
            if (ch == ',' || ch == ';') ch = ' ';
        }
        std::istringstream fields(line);
        std::vector<double> row;
        std::string token;
        while (fields >> token) {
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (end == token.c_str() || *end != '\0') {
                std::ostringstream msg;
                msg << source << ":" << line_no << ": not a number: '" << token << "'";
                throw ParseError(msg.str());
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            std::ostringstream msg;
            msg << source << ":" << line_no << ": row has " << row.size() << " entries, expected "
                << rows.front().size();
            throw ParseError(msg.str());
        }
        rows.push_back(std::move(row));
    }
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
}

void write_csv(std::ostream& out, const ImpulseResponse& ir) {
    out << "n";
    const bool siso = ir.outputs() == 1 && ir.inputs() == 1;
    for (Index o = 0; o < ir.outputs(); ++o) {
        for (Index i = 0; i < ir.inputs(); ++i) {
            if (siso) {
                out << ",h";
            } else {
                out << ",h_" << o << "_" << i;
            }
        }
    }
    out << "\n";
    for (Index n = 0; n < ir.length(); ++n) {
        out << n;
        for (Index o = 0; o < ir.outputs(); ++o) {
            for (Index i = 0; i < ir.inputs(); ++i) {
                const double v = ir.at(o, i, n);
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
                out << "," << buf;
            }
        }
        out << "\n";
    }
}

double peak_normalization(double peak) {
    return peak > 0.0 ? std::pow(10.0, -1.0 / 20.0) / peak : 1.0;
}

void write_wav(const std::filesystem::path& path, const std::vector<std::vector<double>>& channels, int rate,
               double scale) {
    if (channels.empty()) throw DomainError("WAV output needs at least one channel");
    if (rate <= 0) throw DomainError("sample rate must be positive");
    const std::size_t frames = channels.front().size();
    for (const auto& ch : channels) {
        if (ch.size() != frames) throw DimensionError("WAV channels must have equal length");
    }
    const auto count = static_cast<std::uint32_t>(channels.size());
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames) * count * 2u;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path.string() + ": cannot open file for writing");
    out.write("RIFF", 4);
    put_le(out, 36u + data_bytes, 4);
    out.write("WAVEfmt ", 8);
    put_le(out, 16, 4);
    put_le(out, 1, 2);  // PCM
    put_le(out, count, 2);
    put_le(out, static_cast<std::uint32_t>(rate), 4);
    put_le(out, static_cast<std::uint32_t>(rate) * count * 2u, 4);
    put_le(out, count * 2u, 2);
    put_le(out, 16, 2);
    out.write("data", 4);
    put_le(out, data_bytes, 4);
    for (std::size_t n = 0; n < frames; ++n) {
        for (const auto& ch : channels) {
            const double v = std::clamp(std::round(ch[n] * scale * 32767.0), -32768.0, 32767.0);
            put_le(out, static_cast<std::uint32_t>(static_cast<std::int32_t>(v)) & 0xffffu, 2);
        }
    }
    if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace ufdn
