#include "oscnet/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "oscnet/errors.hpp"

namespace oscnet {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_bytes(std::ofstream& out, const void* p, std::size_t count) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(count));
}

template <typename T>
void write_pod(std::ofstream& out, T v) {
    write_bytes(out, &v, sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw Error("binary read failed: truncated file");
    return v;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error("cannot open for writing: " + path.string());
    return out;
}

constexpr std::uint32_t kMatrixVersion = 1;
constexpr std::uint32_t kTrajectoryVersion = 1;

} // namespace

void write_matrix_binary(const WeightMatrix& wm, const std::filesystem::path& path) {
    auto out = open_out(path, true);
    out.write("OSCW", 4);
    write_pod<std::uint32_t>(out, kMatrixVersion);
    write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(wm.n()));
    write_pod<double>(out, wm.alpha());
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(wm.construction()));
    write_pod<std::uint8_t>(out, wm.seed() ? 1 : 0);
    if (wm.seed()) {
        write_pod<std::uint64_t>(out, wm.seed()->seed);
        write_pod<std::uint32_t>(out, wm.seed()->layer_id);
    }
    for (int i = 0; i < wm.n(); ++i)
        for (int j = 0; j < wm.n(); ++j) write_pod<double>(out, wm.entry(i, j));
}

WeightMatrix read_matrix_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "OSCW", 4) != 0) throw Error("bad matrix file magic");
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kMatrixVersion) throw Error("unsupported matrix file version");
    const auto n = static_cast<int>(read_pod<std::uint64_t>(in));
    const double alpha = read_pod<double>(in);
    const auto ctag = static_cast<Construction>(read_pod<std::uint32_t>(in));
    std::optional<SeedRecord> seed;
    if (read_pod<std::uint8_t>(in)) {
        SeedRecord r;
        r.seed = read_pod<std::uint64_t>(in);
        r.layer_id = read_pod<std::uint32_t>(in);
        seed = r;
    }
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (auto& v : w) v = read_pod<double>(in);
    return WeightMatrix::from_dense(n, std::move(w), alpha, ctag, seed);
}

void write_matrix_csv(const WeightMatrix& wm, const std::filesystem::path& path) {
    auto out = open_out(path, false);
    out << "i,j,w\n";
    for (int i = 0; i < wm.n(); ++i)
        for (int j = 0; j < wm.n(); ++j) {
            const double v = wm.entry(i, j);
            if (v != 0.0) out << (i + 1) << ',' << (j + 1) << ',' << format_double(v) << '\n';
        }
}

void write_matrix_pgm(const WeightMatrix& wm, const std::filesystem::path& path) {
    auto out = open_out(path, true);
    const int n = wm.n();
    double max_w = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) max_w = std::max(max_w, wm.entry(i, j));
    if (max_w <= 0.0) max_w = 1.0;
    out << "P5\n" << n << " " << n << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = wm.entry(i, j) / max_w;
            row[j] = static_cast<unsigned char>(255.0 - std::round(255.0 * v));
        }
        write_bytes(out, row.data(), row.size());
    }
}

void write_trajectory_csv(const Trajectory& tr, const std::filesystem::path& path) {
    auto out = open_out(path, false);
    const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
    out << "t";
    for (std::size_t j = 0; j < n; ++j) out << ",u" << (j + 1);
    out << '\n';
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        out << format_double(tr.times[k]);
        for (double v : tr.states[k]) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_trajectory_binary(const Trajectory& tr, const std::filesystem::path& path) {
    auto out = open_out(path, true);
    out.write("OSCT", 4);
    write_pod<std::uint32_t>(out, kTrajectoryVersion);
    const std::uint64_t n = tr.states.empty() ? 0 : tr.states.front().size();
    write_pod<std::uint64_t>(out, n);
    write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(tr.times.size()));
    write_pod<double>(out, tr.dt);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        write_pod<double>(out, tr.times[k]);
        for (double v : tr.states[k]) write_pod<double>(out, v);
    }
}

Trajectory read_trajectory_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "OSCT", 4) != 0) throw Error("bad trajectory file magic");
    if (read_pod<std::uint32_t>(in) != kTrajectoryVersion)
        throw Error("unsupported trajectory file version");
    const auto n = read_pod<std::uint64_t>(in);
    const auto samples = read_pod<std::uint64_t>(in);
    Trajectory tr;
    tr.dt = read_pod<double>(in);
    for (std::uint64_t k = 0; k < samples; ++k) {
        tr.times.push_back(read_pod<double>(in));
        std::vector<double> u(n);
        for (auto& v : u) v = read_pod<double>(in);
        tr.states.push_back(std::move(u));
    }
    return tr;
}

void write_snapshot_csv(const std::vector<double>& u, double t, const std::filesystem::path& path) {
    auto out = open_out(path, false);
    out << "# t = " << format_double(t) << "\n";
    out << "i,x,u\n";
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
        out << (i + 1) << ',' << format_double(x) << ',' << format_double(u[i]) << '\n';
    }
}

} // namespace oscnet
