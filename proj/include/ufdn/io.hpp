#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ufdn/fdn.hpp"

namespace ufdn {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// An FdnSystem with the free-form parts of its JSON document. `extras` holds
// additional top-level keys (certificates, pole reports) written by the CLI.
struct FdnDocument {
    FdnSystem system;
    Json meta;
    Json verify;
    Json extras = Json::object();
};

Json to_json(const FdnDocument& doc);
FdnDocument from_json(const Json& j);

// Canonical text: sorted keys, two-space indent, scalar arrays on one line,
// floats with 17 significant digits, trailing newline.
std::string canonical_dump(const Json& j);
std::string format_double(double x);

std::string serialize(const FdnDocument& doc);

// Throws ParseError with "source:line:column" for malformed JSON and for
// schema violations; DimensionError when blocks do not fit together.
FdnDocument parse_document(std::string_view text, std::string_view source = "<input>");
FdnDocument load_document(const std::filesystem::path& path);
void save_document(const FdnDocument& doc, const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// A bare matrix: a JSON 2-D array, a JSON object with an "A" field, or rows
// of whitespace-separated numbers.
Matrix parse_matrix(std::string_view text, std::string_view source = "<input>");

// Header row, then one row per sample: n, h[out][in] for every channel.
void write_csv(std::ostream& out, const ImpulseResponse& ir);

struct WavInfo {
    double peak = 0.0;   // largest |sample| before scaling
    double scale = 1.0;  // factor applied before quantization
    int rate = 0;
    int channels = 0;
};

// Scale that brings `peak` to -1 dBFS (1 when the signal is silent).
double peak_normalization(double peak);

// 16-bit PCM RIFF file. Channels are interleaved; each channel has the same
// number of samples. Uses `scale` for every channel.
void write_wav(const std::filesystem::path& path, const std::vector<std::vector<double>>& channels, int rate,
               double scale);

}  // namespace ufdn
