#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "roivault/errors.hpp"

namespace roivault {

enum class Datatype : std::uint8_t { U8, I16, U16, F32 };

std::size_t datatype_size(Datatype dt);
std::int16_t nifti_datatype_code(Datatype dt);
Datatype datatype_from_nifti_code(std::int16_t code); // throws UnsupportedDatatype
const char* datatype_name(Datatype dt);
Datatype datatype_from_name(const std::string& name); // throws UnsupportedDatatype
double datatype_max(Datatype dt); // integer types only; F32 has no fixed peak

enum class Endianness : std::uint8_t { Little, Big };

/// In-memory volumetric image. Voxel bytes are kept exactly as stored on
/// disk (endianness recorded, scl_slope/scl_inter never applied); decoding
/// to double happens only at the metrics/segmentation boundary.
struct Volume {
    std::vector<std::int64_t> dims;   // dim[1..rank], axis 1 fastest
    std::vector<double> spacing;      // mm per axis
    Datatype datatype = Datatype::U8;
    Endianness endianness = Endianness::Little;
    std::vector<std::uint8_t> voxel_data;
    std::vector<std::uint8_t> header_blob; // original header + extensions, verbatim

    int rank() const { return static_cast<int>(dims.size()); }
    std::int64_t voxel_count() const;
    std::size_t bytes_per_voxel() const { return datatype_size(datatype); }

    double value_at(std::int64_t i) const;
    void set_value(std::int64_t i, double v);

    void validate() const; // checks the Volume invariants
};

struct VolumeStats {
    double mean = 0.0;
    double stddev = 0.0;
    double p_low = 0.0;
    double p_high = 0.0;
    bool degenerate = false; // all voxels equal; output was forced to zero
};

bool same_dims(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);
std::string dims_to_string(const std::vector<std::int64_t>& dims);   // "4x4x2"
std::vector<std::int64_t> dims_from_string(const std::string& s);

} // namespace roivault
