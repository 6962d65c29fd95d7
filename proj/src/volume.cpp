#include "roivault/volume.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

namespace roivault {

std::size_t datatype_size(Datatype dt) {
    switch (dt) {
    case Datatype::U8: return 1;
    case Datatype::I16: return 2;
    case Datatype::U16: return 2;
    case Datatype::F32: return 4;
    }
    return 0;
}

std::int16_t nifti_datatype_code(Datatype dt) {
    switch (dt) {
    case Datatype::U8: return 2;
    case Datatype::I16: return 4;
    case Datatype::U16: return 512;
    case Datatype::F32: return 16;
    }
    return 0;
}

Datatype datatype_from_nifti_code(std::int16_t code) {
    switch (code) {
    case 2: return Datatype::U8;
    case 4: return Datatype::I16;
    case 512: return Datatype::U16;
    case 16: return Datatype::F32;
    default:
        throw UnsupportedDatatype("unsupported NIfTI datatype code " + std::to_string(code));
    }
}

const char* datatype_name(Datatype dt) {
    switch (dt) {
    case Datatype::U8: return "U8";
    case Datatype::I16: return "I16";
    case Datatype::U16: return "U16";
    case Datatype::F32: return "F32";
    }
    return "?";
}

Datatype datatype_from_name(const std::string& name) {
    if (name == "U8" || name == "u8") return Datatype::U8;
    if (name == "I16" || name == "i16") return Datatype::I16;
    if (name == "U16" || name == "u16") return Datatype::U16;
    if (name == "F32" || name == "f32") return Datatype::F32;
    throw UnsupportedDatatype("unknown datatype name '" + name + "'");
}

double datatype_max(Datatype dt) {
    switch (dt) {
    case Datatype::U8: return 255.0;
    case Datatype::I16: return 32767.0;
    case Datatype::U16: return 65535.0;
    case Datatype::F32: return 0.0; // caller derives peak from data
    }
    return 0.0;
}

std::int64_t Volume::voxel_count() const {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

namespace {

template <typename T>
T load_scalar(const std::uint8_t* p, Endianness e) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    if (e == Endianness::Big) {
        auto raw = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
        std::reverse(raw.begin(), raw.end());
        v = std::bit_cast<T>(raw);
    }
    return v;
}

template <typename T>
void store_scalar(std::uint8_t* p, T v, Endianness e) {
    if (e == Endianness::Big) {
        auto raw = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
        std::reverse(raw.begin(), raw.end());
        v = std::bit_cast<T>(raw);
    }
    std::memcpy(p, &v, sizeof(T));
}

} // namespace

double Volume::value_at(std::int64_t i) const {
    const std::uint8_t* p = voxel_data.data() + static_cast<std::size_t>(i) * bytes_per_voxel();
    switch (datatype) {
    case Datatype::U8: return static_cast<double>(*p);
    case Datatype::I16: return static_cast<double>(load_scalar<std::int16_t>(p, endianness));
    case Datatype::U16: return static_cast<double>(load_scalar<std::uint16_t>(p, endianness));
    case Datatype::F32: return static_cast<double>(load_scalar<float>(p, endianness));
    }
    return 0.0;
}

void Volume::set_value(std::int64_t i, double v) {
    std::uint8_t* p = voxel_data.data() + static_cast<std::size_t>(i) * bytes_per_voxel();
    switch (datatype) {
    case Datatype::U8: *p = static_cast<std::uint8_t>(v); break;
    case Datatype::I16: store_scalar(p, static_cast<std::int16_t>(v), endianness); break;
    case Datatype::U16: store_scalar(p, static_cast<std::uint16_t>(v), endianness); break;
    case Datatype::F32: store_scalar(p, static_cast<float>(v), endianness); break;
    }
}

void Volume::validate() const {
    if (dims.empty() || dims.size() > 7)
        throw BadDims("rank must be 1..7, got " + std::to_string(dims.size()));
    for (auto d : dims)
        if (d < 1) throw BadDims("axis extent must be >= 1");
    for (double s : spacing)
        if (!(std::isfinite(s) && s > 0.0))
            throw NonPositiveSpacing("spacing must be finite and > 0");
    if (voxel_data.size() != static_cast<std::size_t>(voxel_count()) * bytes_per_voxel())
        throw SizeMismatch("voxel_data length does not match dims x bytes_per_voxel");
}

bool same_dims(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    return a == b;
}

std::string dims_to_string(const std::vector<std::int64_t>& dims) {
    std::ostringstream os;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) os << 'x';
        os << dims[i];
    }
    return os.str();
}

std::vector<std::int64_t> dims_from_string(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, 'x')) {
        if (tok.empty()) throw BadDims("malformed dims string '" + s + "'");
        out.push_back(std::stoll(tok));
    }
    if (out.empty()) throw BadDims("empty dims string");
    return out;
}

} // namespace roivault
