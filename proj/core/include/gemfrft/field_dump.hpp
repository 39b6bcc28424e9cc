#ifndef GEMFRFT_FIELD_DUMP_HPP
#define GEMFRFT_FIELD_DUMP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gemfrft/pulse.hpp"
#include "gemfrft/wigner.hpp"

namespace gemfrft {

// Binary field dump, little-endian:
//   magic "GEFD" | u16 version | u8 kind | u8 n_axes
//   per axis: f64 start | f64 step | u64 count
//   payload: (re, im) f64 pairs for signal/spinwave, f64 row-major for wigner.
struct FieldDump {
    enum class Kind : std::uint8_t { signal = 0, spinwave = 1, wigner = 2 };
    static constexpr std::uint16_t current_version = 1;

    Kind kind = Kind::signal;
    std::vector<AxisDesc> axes;          // 1 axis (signal/spinwave) or 2 (wigner)
    std::vector<cplx> complex_payload;   // signal/spinwave
    std::vector<double> real_payload;    // wigner

    void save(const std::string& path) const;
    static FieldDump load(const std::string& path);

    static FieldDump from_signal(const PulseSignal& s);
    static FieldDump from_spinwave(const std::vector<cplx>& s); // z on [0, 1]
    static FieldDump from_wigner(const WignerMap& m);

    PulseSignal to_signal() const;
    std::vector<cplx> to_spinwave() const;
    WignerMap to_wigner() const;
};

} // namespace gemfrft

#endif
