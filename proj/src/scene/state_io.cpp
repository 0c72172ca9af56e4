#include "tacsim/scene/state_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace tacsim {

static_assert(std::endian::native == std::endian::little,
              "state frames are little-endian; byte swapping not implemented");

namespace {
constexpr char kMagic[8] = {'T', 'S', 'I', 'M', 'F', 'R', 'M', '1'};

void put_doubles(std::ofstream& out, const double* p, size_t n) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void get_doubles(std::ifstream& in, double* p, size_t n) {
    in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}
}  // namespace

void save_state_frame(const std::string& path, const SimState& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open state frame for writing: " + path);
    out.write(kMagic, 8);
    const uint64_t n = state.x.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    put_doubles(out, &state.time, 1);
    double rot[9];
    Eigen::Map<Eigen::Matrix<double, 3, 3, Eigen::RowMajor>> rot_map(rot);
    rot_map = state.indenter_pose.rotation;
    put_doubles(out, rot, 9);
    put_doubles(out, state.indenter_pose.translation.data(), 3);
    for (const auto& p : state.x) put_doubles(out, p.data(), 3);
    for (const auto& p : state.v) put_doubles(out, p.data(), 3);
    if (!out) throw IoError("short write on state frame: " + path);
}

SimState load_state_frame(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open state frame: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw IoError("bad state frame magic: " + path);
    uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    SimState s;
    get_doubles(in, &s.time, 1);
    double rot[9];
    get_doubles(in, rot, 9);
    s.indenter_pose.rotation = Eigen::Map<Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(rot);
    get_doubles(in, s.indenter_pose.translation.data(), 3);
    s.x.resize(n);
    s.v.resize(n);
    for (auto& p : s.x) get_doubles(in, p.data(), 3);
    for (auto& p : s.v) get_doubles(in, p.data(), 3);
    if (!in) throw IoError("truncated state frame: " + path);
    return s;
}

}  // namespace tacsim
