#include "fluxres/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "fluxres/errors.hpp"

namespace fluxres {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error("failed to format a double");
    return {buf.data(), end};
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw InvalidArgument("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::json to_json(const DriftMetrics &m) {
    return {{"mean", m.mean},
            {"peak_to_peak", m.peak_to_peak},
            {"rms_dev", m.rms_dev},
            {"window", nlohmann::json::array({m.window.start, m.window.end})},
            {"count", m.count}};
}

}  // namespace fluxres
