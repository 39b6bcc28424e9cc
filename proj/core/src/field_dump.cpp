#include "gemfrft/field_dump.hpp"

#include <cstring>
#include <fstream>

#include "gemfrft/errors.hpp"

namespace gemfrft {

namespace {

constexpr char magic[4] = {'G', 'E', 'F', 'D'};

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw io_error("FieldDump: truncated file");
    return v;
}

} // namespace

void FieldDump::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("FieldDump: cannot open " + path + " for writing");
    os.write(magic, 4);
    put<std::uint16_t>(os, current_version);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(kind));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(axes.size()));
    std::uint64_t expected = 1;
    for (const auto& ax : axes) {
        put<double>(os, ax.start);
        put<double>(os, ax.step);
        put<std::uint64_t>(os, ax.count);
        expected *= ax.count;
    }
    if (kind == Kind::wigner) {
        if (real_payload.size() != expected)
            throw io_error("FieldDump: payload length does not match axes");
        os.write(reinterpret_cast<const char*>(real_payload.data()),
                 static_cast<std::streamsize>(real_payload.size() * sizeof(double)));
    } else {
        if (complex_payload.size() != expected)
            throw io_error("FieldDump: payload length does not match axes");
        os.write(reinterpret_cast<const char*>(complex_payload.data()),
                 static_cast<std::streamsize>(complex_payload.size() * 2 * sizeof(double)));
    }
    if (!os) throw io_error("FieldDump: write failed for " + path);
}

FieldDump FieldDump::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("FieldDump: cannot open " + path);
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, magic, 4) != 0)
        throw io_error("FieldDump: bad magic in " + path);
    const auto version = get<std::uint16_t>(is);
    if (version != current_version)
        throw io_error("FieldDump: unsupported version in " + path);
    FieldDump d;
    d.kind = static_cast<Kind>(get<std::uint8_t>(is));
    const auto n_axes = get<std::uint8_t>(is);
    if (n_axes < 1 || n_axes > 2) throw io_error("FieldDump: bad axis count in " + path);
    std::uint64_t expected = 1;
    for (int a = 0; a < n_axes; ++a) {
        AxisDesc ax;
        ax.start = get<double>(is);
        ax.step = get<double>(is);
        ax.count = get<std::uint64_t>(is);
        expected *= ax.count;
        d.axes.push_back(ax);
    }
    if (expected == 0 || expected > (1ull << 32))
        throw io_error("FieldDump: implausible payload size in " + path);
    if (d.kind == Kind::wigner) {
        d.real_payload.resize(expected);
        is.read(reinterpret_cast<char*>(d.real_payload.data()),
                static_cast<std::streamsize>(expected * sizeof(double)));
    } else {
        d.complex_payload.resize(expected);
        is.read(reinterpret_cast<char*>(d.complex_payload.data()),
                static_cast<std::streamsize>(expected * 2 * sizeof(double)));
    }
    if (!is) throw io_error("FieldDump: truncated payload in " + path);
    return d;
}

FieldDump FieldDump::from_signal(const PulseSignal& s) {
    FieldDump d;
    d.kind = Kind::signal;
    d.axes = {AxisDesc{s.grid.t_start, s.grid.dt, s.grid.n_samples}};
    d.complex_payload = s.amplitude;
    return d;
}

FieldDump FieldDump::from_spinwave(const std::vector<cplx>& s) {
    if (s.size() < 2) throw invalid_parameter("FieldDump: spinwave too short");
    FieldDump d;
    d.kind = Kind::spinwave;
    d.axes = {AxisDesc{0.0, 1.0 / (double(s.size()) - 1.0), s.size()}};
    d.complex_payload = s;
    return d;
}

FieldDump FieldDump::from_wigner(const WignerMap& m) {
    FieldDump d;
    d.kind = Kind::wigner;
    d.axes = {m.axis1, m.axis2};
    d.real_payload = m.values;
    return d;
}

PulseSignal FieldDump::to_signal() const {
    if (kind != Kind::signal || axes.size() != 1)
        throw io_error("FieldDump: not a signal dump");
    return PulseSignal(TimeGrid(axes[0].start, axes[0].step, axes[0].count), complex_payload);
}

std::vector<cplx> FieldDump::to_spinwave() const {
    if (kind != Kind::spinwave || axes.size() != 1)
        throw io_error("FieldDump: not a spinwave dump");
    return complex_payload;
}

WignerMap FieldDump::to_wigner() const {
    if (kind != Kind::wigner || axes.size() != 2)
        throw io_error("FieldDump: not a wigner dump");
    WignerMap m;
    m.axis1 = axes[0];
    m.axis2 = axes[1];
    m.values = real_payload;
    return m;
}

} // namespace gemfrft
