#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "roivault/digest.hpp"
#include "roivault/henon.hpp"
#include "roivault/mask.hpp"
#include "roivault/volume.hpp"

namespace roivault {

/// Keystream bytes reserved for the key-verification tag; the voxel stream
/// starts after them.
constexpr std::uint64_t kTagStreamBytes = 64;

constexpr const char* kCipherId = "henon-xor-v1";
constexpr const char* kCiphertextFile = "volume.enc.nii";
constexpr const char* kMaskFile = "mask.nii";
constexpr const char* kManifestFile = "manifest.txt";

/// Ordered linear voxel indices of the mask's set bits (row-major scan); the
/// n-th ROI voxel consumes the n-th keystream chunk.
struct CipherPlan {
    std::vector<std::int64_t> roi_positions;
    std::uint64_t bytes_needed = 0;

    static CipherPlan build(const RoiMask& m, std::size_t bytes_per_voxel);
};

/// Line-oriented key=value manifest, format_version 1.
struct Manifest {
    int format_version = 1;
    std::string cipher = kCipherId;
    std::vector<std::int64_t> dims;
    Datatype datatype = Datatype::U8;
    std::vector<double> spacing;
    std::int64_t roi_count = 0;
    double roi_fraction = 0.0;
    std::uint64_t burn_in = 1000;
    Sha256Digest verification_tag{}; // digest of keystream bytes [0, 64)
    Sha256Digest original_digest{};  // digest of the plaintext voxel bytes
    std::string created_at;          // ISO-8601 UTC

    std::string serialize() const;
    static Manifest parse(const std::string& text);
};

struct VaultEntry {
    Manifest manifest;
    std::filesystem::path dir;
};

/// XOR keystream bytes into ROI voxels only. Non-ROI voxels and the header
/// are untouched. stream_offset positions the cipher within the keystream
/// (the vault uses kTagStreamBytes). consumed, when given, receives the
/// number of keystream bytes drawn for voxel data.
/// An empty mask is a no-op; callers that need to distinguish a no-op from
/// protection should check m.roi_count first.
Volume encrypt_selective(const Volume& v, const RoiMask& m, const KeySchedule& ks,
                         std::uint64_t stream_offset = 0, std::uint64_t* consumed = nullptr);

/// Identical procedure (XOR is an involution).
Volume decrypt_selective(const Volume& c, const RoiMask& m, const KeySchedule& ks,
                         std::uint64_t stream_offset = 0, std::uint64_t* consumed = nullptr);

/// Full-volume baseline: encrypt_selective with an all-ones mask.
Volume encrypt_full(const Volume& v, const KeySchedule& ks, std::uint64_t stream_offset = 0,
                    std::uint64_t* consumed = nullptr);
Volume decrypt_full(const Volume& c, const KeySchedule& ks, std::uint64_t stream_offset = 0,
                    std::uint64_t* consumed = nullptr);

/// Write ciphertext + cleartext mask + manifest atomically (temp dir,
/// renamed into place on success). dest must not already exist.
VaultEntry store(const Volume& v, const RoiMask& m, const KeySchedule& ks,
                 const std::filesystem::path& dest);

/// Verify the key against the manifest tag (before touching any voxel),
/// decrypt the ROI, and verify the plaintext digest.
Volume retrieve(const std::filesystem::path& entry_dir, std::string_view passphrase);
Volume retrieve_with_schedule(const std::filesystem::path& entry_dir, const KeySchedule& ks);

Manifest read_manifest(const std::filesystem::path& entry_dir);

} // namespace roivault
