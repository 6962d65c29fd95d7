#include "roivault/vault.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "roivault/nifti.hpp"

namespace roivault {

CipherPlan CipherPlan::build(const RoiMask& m, std::size_t bytes_per_voxel) {
    CipherPlan plan;
    plan.roi_positions.reserve(m.roi_count);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m.bits.size()); ++i)
        if (m.bits[i]) plan.roi_positions.push_back(i);
    plan.bytes_needed = static_cast<std::uint64_t>(plan.roi_positions.size()) * bytes_per_voxel;
    return plan;
}

namespace {

Volume xor_selective(const Volume& v, const RoiMask& m, const KeySchedule& ks,
                     std::uint64_t stream_offset, std::uint64_t* consumed) {
    v.validate();
    if (!same_dims(v.dims, m.dims))
        throw DimsMismatch("volume dims " + dims_to_string(v.dims) + " != mask dims " +
                           dims_to_string(m.dims));

    Volume out = v;
    if (m.roi_count == 0) {
        if (consumed) *consumed = 0;
        return out;
    }

    const std::size_t bpv = v.bytes_per_voxel();
    CipherPlan plan = CipherPlan::build(m, bpv);
    Keystream stream(ks);
    stream.skip(stream_offset);
    for (std::int64_t pos : plan.roi_positions) {
        std::uint8_t* p = out.voxel_data.data() + static_cast<std::size_t>(pos) * bpv;
        for (std::size_t b = 0; b < bpv; ++b) p[b] ^= stream.next();
    }
    if (consumed) *consumed = stream.bytes_emitted();
    return out;
}

RoiMask full_mask(const std::vector<std::int64_t>& dims) {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    return RoiMask::from_bits(dims, std::vector<std::uint8_t>(n, 1));
}

} // namespace

Volume encrypt_selective(const Volume& v, const RoiMask& m, const KeySchedule& ks,
                         std::uint64_t stream_offset, std::uint64_t* consumed) {
    return xor_selective(v, m, ks, stream_offset, consumed);
}

Volume decrypt_selective(const Volume& c, const RoiMask& m, const KeySchedule& ks,
                         std::uint64_t stream_offset, std::uint64_t* consumed) {
    return xor_selective(c, m, ks, stream_offset, consumed);
}

Volume encrypt_full(const Volume& v, const KeySchedule& ks, std::uint64_t stream_offset,
                    std::uint64_t* consumed) {
    return xor_selective(v, full_mask(v.dims), ks, stream_offset, consumed);
}

Volume decrypt_full(const Volume& c, const KeySchedule& ks, std::uint64_t stream_offset,
                    std::uint64_t* consumed) {
    return xor_selective(c, full_mask(c.dims), ks, stream_offset, consumed);
}

std::string Manifest::serialize() const {
    std::ostringstream os;
    os.precision(17); // doubles must survive the text round trip
    os << "format_version=" << format_version << '\n';
    os << "cipher=" << cipher << '\n';
    os << "dims=" << dims_to_string(dims) << '\n';
    os << "datatype=" << datatype_name(datatype) << '\n';
    os << "spacing=";
    for (std::size_t i = 0; i < spacing.size(); ++i) {
        if (i) os << 'x';
        os << spacing[i];
    }
    os << '\n';
    os << "roi_count=" << roi_count << '\n';
    os << "roi_fraction=" << roi_fraction << '\n';
    os << "burn_in=" << burn_in << '\n';
    os << "verification_tag=" << to_hex(verification_tag) << '\n';
    os << "original_digest=" << to_hex(original_digest) << '\n';
    os << "created_at=" << created_at << '\n';
    return os.str();
}

Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        if (key == "format_version") m.format_version = std::stoi(val);
        else if (key == "cipher") m.cipher = val;
        else if (key == "dims") m.dims = dims_from_string(val);
        else if (key == "datatype") m.datatype = datatype_from_name(val);
        else if (key == "spacing") {
            m.spacing.clear();
            std::stringstream ss(val);
            std::string tok;
            while (std::getline(ss, tok, 'x')) m.spacing.push_back(std::stod(tok));
        }
        else if (key == "roi_count") m.roi_count = std::stoll(val);
        else if (key == "roi_fraction") m.roi_fraction = std::stod(val);
        else if (key == "burn_in") m.burn_in = std::stoull(val);
        else if (key == "verification_tag") m.verification_tag = digest_from_hex(val);
        else if (key == "original_digest") m.original_digest = digest_from_hex(val);
        else if (key == "created_at") m.created_at = val;
    }
    if (m.format_version != 1)
        throw CorruptEntry("unsupported manifest format_version " +
                           std::to_string(m.format_version));
    if (m.cipher != kCipherId)
        throw CorruptEntry("unknown cipher id '" + m.cipher + "'");
    return m;
}

namespace {

std::string iso8601_utc_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    out << text;
    if (!out) throw IoError("short write to " + p.string());
}

std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

VaultEntry store(const Volume& v, const RoiMask& m, const KeySchedule& ks,
                 const std::filesystem::path& dest) {
    if (std::filesystem::exists(dest))
        throw IoError("vault entry already exists: " + dest.string());

    Manifest manifest;
    manifest.dims = v.dims;
    manifest.datatype = v.datatype;
    manifest.spacing = v.spacing;
    manifest.roi_count = m.roi_count;
    manifest.roi_fraction = m.roi_fraction();
    manifest.burn_in = ks.burn_in;
    manifest.verification_tag = sha256(keystream(ks, kTagStreamBytes));
    manifest.original_digest = sha256(v.voxel_data);
    manifest.created_at = iso8601_utc_now();

    Volume ciphertext = encrypt_selective(v, m, ks, kTagStreamBytes);

    // write everything into a temp sibling, rename on success
    std::random_device rd;
    auto tmp = dest;
    tmp += ".tmp" + std::to_string(rd());
    std::filesystem::create_directories(tmp);
    try {
        write_volume(tmp / kCiphertextFile, ciphertext);
        write_volume(tmp / kMaskFile, mask_to_volume(m, v.spacing));
        write_text_file(tmp / kManifestFile, manifest.serialize());
        std::filesystem::rename(tmp, dest);
    } catch (...) {
        std::filesystem::remove_all(tmp);
        throw;
    }
    return {manifest, dest};
}

Manifest read_manifest(const std::filesystem::path& entry_dir) {
    return Manifest::parse(read_text_file(entry_dir / kManifestFile));
}

Volume retrieve_with_schedule(const std::filesystem::path& entry_dir, const KeySchedule& ks) {
    Manifest manifest = read_manifest(entry_dir);

    // key check first: the tag depends only on the schedule
    if (sha256(keystream(ks, kTagStreamBytes)) != manifest.verification_tag)
        throw WrongKey("verification tag mismatch for " + entry_dir.string());

    Volume ciphertext = read_volume(entry_dir / kCiphertextFile);
    if (!same_dims(ciphertext.dims, manifest.dims))
        throw CorruptEntry("ciphertext dims disagree with manifest");

    std::ifstream mask_in(entry_dir / kMaskFile, std::ios::binary);
    if (!mask_in) throw IoError("cannot open " + (entry_dir / kMaskFile).string());
    std::vector<std::uint8_t> mask_bytes{std::istreambuf_iterator<char>(mask_in),
                                         std::istreambuf_iterator<char>()};
    if (is_gzip(mask_bytes)) mask_bytes = gzip_decompress(mask_bytes);
    RoiMask mask = load_mask(mask_bytes, manifest.dims);
    if (mask.roi_count != manifest.roi_count)
        throw CorruptEntry("mask population count disagrees with manifest");

    Volume plain = decrypt_selective(ciphertext, mask, ks, kTagStreamBytes);
    if (sha256(plain.voxel_data) != manifest.original_digest)
        throw CorruptEntry("plaintext digest mismatch after decryption");
    return plain;
}

Volume retrieve(const std::filesystem::path& entry_dir, std::string_view passphrase) {
    Manifest manifest = read_manifest(entry_dir);
    KeySchedule ks = KeySchedule::from_passphrase(passphrase, {}, manifest.burn_in);
    return retrieve_with_schedule(entry_dir, ks);
}

} // namespace roivault
