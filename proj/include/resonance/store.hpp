#pragma once

// Append-only pattern store over memory-mapped segment files.
//
// Segment file `seg-NNNNNN.rdb`, little-endian:
//
//   header (64 bytes)
//     0   magic "RSNDB001"
//     8   u16 format_version (1)
//     10  u16 zero
//     12  u32 dim L
//     16  u32 record_capacity
//     20  zero padding
//   records, record_capacity of them, each align8(17 + 8L) bytes
//     0   u8  flag: 0x00 empty, 0x01 live, 0x02 tombstone
//     1   16  id bytes
//     17  L x f32 amplitude
//     17+4L L x f32 phase
//
// Files are sized to full capacity on creation. A record body is written
// before its flag, so a record is visible iff its flag byte reads 0x01.
// Single writer, many readers: readers may scan while inserts happen.

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "resonance/core_types.hpp"
#include "resonance/error.hpp"

namespace resonance {

static_assert(std::endian::native == std::endian::little,
              "segment records are read in place as little-endian float32");

inline constexpr std::size_t kHeaderSize = 64;
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::string_view kSegmentMagic = "RSNDB001";
inline constexpr std::uint32_t kDefaultSegmentRecords = 65536;

enum class RecordFlag : std::uint8_t { Empty = 0x00, Live = 0x01, Tombstone = 0x02 };

[[nodiscard]] constexpr std::size_t record_size(std::uint32_t dim) noexcept {
  const std::size_t raw = 1 + PatternId::kSize + 8 * static_cast<std::size_t>(dim);
  return (raw + 7) & ~std::size_t{7};
}

struct SegmentHeader {
  std::array<char, 8> magic{};
  std::uint16_t format_version = 0;
  std::uint32_t dim = 0;
  std::uint32_t record_capacity = 0;
};

namespace detail {

inline std::string errno_text(const std::string& what, const std::filesystem::path& path) {
  return what + " '" + path.string() + "': " + std::strerror(errno);
}

inline void put_u16(std::uint8_t* p, std::uint16_t v) noexcept {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

inline void put_u32(std::uint8_t* p, std::uint32_t v) noexcept {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

inline std::uint16_t get_u16(const std::uint8_t* p) noexcept {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline std::uint32_t get_u32(const std::uint8_t* p) noexcept {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

inline std::array<std::uint8_t, kHeaderSize> encode_header(std::uint32_t dim,
                                                           std::uint32_t capacity) noexcept {
  std::array<std::uint8_t, kHeaderSize> h{};
  std::memcpy(h.data(), kSegmentMagic.data(), kSegmentMagic.size());
  put_u16(h.data() + 8, kFormatVersion);
  put_u32(h.data() + 12, dim);
  put_u32(h.data() + 16, capacity);
  return h;
}

inline SegmentHeader decode_header(std::span<const std::uint8_t, kHeaderSize> h) noexcept {
  SegmentHeader out;
  std::memcpy(out.magic.data(), h.data(), out.magic.size());
  out.format_version = get_u16(h.data() + 8);
  out.dim = get_u32(h.data() + 12);
  out.record_capacity = get_u32(h.data() + 16);
  return out;
}

// Owns an fd; closes on destruction.
class FileDescriptor {
 public:
  FileDescriptor() = default;
  explicit FileDescriptor(int fd) noexcept : fd_(fd) {}
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  FileDescriptor(FileDescriptor&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  [[nodiscard]] int get() const noexcept { return fd_; }

 private:
  int fd_ = -1;
};

}  // namespace detail

/// Reads the 64-byte header of a segment file without mapping it.
[[nodiscard]] inline SegmentHeader read_segment_header(const std::filesystem::path& path) {
  detail::FileDescriptor fd(::open(path.c_str(), O_RDONLY | O_CLOEXEC));
  if (fd.get() < 0) throw Error(ErrorCode::IoFailure, detail::errno_text("cannot open", path));
  std::array<std::uint8_t, kHeaderSize> raw{};
  const ssize_t n = ::pread(fd.get(), raw.data(), raw.size(), 0);
  if (n != static_cast<ssize_t>(raw.size())) {
    throw Error(ErrorCode::CorruptHeader, "short header in '" + path.string() + "'");
  }
  return detail::decode_header(raw);
}

/// One memory-mapped segment file.
class Segment {
 public:
  Segment(const Segment&) = delete;
  Segment& operator=(const Segment&) = delete;

  ~Segment() {
    if (base_ != nullptr) {
      ::msync(base_, map_size_, MS_SYNC);
      ::munmap(base_, map_size_);
    }
  }

  [[nodiscard]] static std::shared_ptr<Segment> create(const std::filesystem::path& path,
                                                       std::uint32_t dim, std::uint32_t capacity) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
    if (capacity == 0) throw Error(ErrorCode::InvalidArgument, "segment capacity must be at least 1");
    detail::FileDescriptor fd(::open(path.c_str(), O_RDWR | O_CREAT | O_EXCL | O_CLOEXEC, 0644));
    if (fd.get() < 0) throw Error(ErrorCode::IoFailure, detail::errno_text("cannot create", path));
    const auto header = detail::encode_header(dim, capacity);
    if (::pwrite(fd.get(), header.data(), header.size(), 0) != static_cast<ssize_t>(header.size())) {
      throw Error(ErrorCode::IoFailure, detail::errno_text("cannot write header", path));
    }
    const std::size_t size = kHeaderSize + static_cast<std::size_t>(capacity) * record_size(dim);
    if (::ftruncate(fd.get(), static_cast<off_t>(size)) != 0) {
      throw Error(ErrorCode::IoFailure, detail::errno_text("cannot size", path));
    }
    auto seg = std::shared_ptr<Segment>(new Segment(path, std::move(fd), dim, capacity));
    seg->map(size);
    return seg;
  }

  /// Opens an existing segment. A file cut short (crash or truncation) keeps
  /// its complete records; any partial trailing record is zeroed, so it reads
  /// as empty, and the file is grown back to full capacity.
  [[nodiscard]] static std::shared_ptr<Segment> open(const std::filesystem::path& path) {
    detail::FileDescriptor fd(::open(path.c_str(), O_RDWR | O_CLOEXEC));
    if (fd.get() < 0) throw Error(ErrorCode::IoFailure, detail::errno_text("cannot open", path));
    struct stat st {};
    if (::fstat(fd.get(), &st) != 0) throw Error(ErrorCode::IoFailure, detail::errno_text("cannot stat", path));
    const auto file_size = static_cast<std::size_t>(st.st_size);
    if (file_size < kHeaderSize) {
      throw Error(ErrorCode::CorruptHeader, "segment '" + path.string() + "' shorter than its header");
    }
    std::array<std::uint8_t, kHeaderSize> raw{};
    if (::pread(fd.get(), raw.data(), raw.size(), 0) != static_cast<ssize_t>(raw.size())) {
      throw Error(ErrorCode::IoFailure, detail::errno_text("cannot read header", path));
    }
    const SegmentHeader h = detail::decode_header(raw);
    if (std::string_view(h.magic.data(), h.magic.size()) != kSegmentMagic) {
      throw Error(ErrorCode::CorruptHeader, "bad magic in '" + path.string() + "'");
    }
    if (h.format_version != kFormatVersion) {
      throw Error(ErrorCode::CorruptHeader, "unsupported format version " +
                                                std::to_string(h.format_version) + " in '" +
                                                path.string() + "'");
    }
    if (h.dim == 0 || h.record_capacity == 0) {
      throw Error(ErrorCode::CorruptHeader, "zero dimension or capacity in '" + path.string() + "'");
    }
    const std::size_t rec = record_size(h.dim);
    const std::size_t full = kHeaderSize + static_cast<std::size_t>(h.record_capacity) * rec;
    if (file_size > full) {
      throw Error(ErrorCode::CorruptHeader, "segment '" + path.string() + "' larger than its capacity");
    }
    if (file_size < full) {
      const std::size_t complete = (file_size - kHeaderSize) / rec;
      const std::size_t keep = kHeaderSize + complete * rec;
      if (::ftruncate(fd.get(), static_cast<off_t>(keep)) != 0 ||
          ::ftruncate(fd.get(), static_cast<off_t>(full)) != 0) {
        throw Error(ErrorCode::IoFailure, detail::errno_text("cannot repair", path));
      }
    }
    auto seg = std::shared_ptr<Segment>(new Segment(path, std::move(fd), h.dim, h.record_capacity));
    seg->map(full);
    std::uint32_t used = 0;
    for (std::uint32_t slot = 0; slot < seg->capacity_; ++slot) {
      if (seg->raw_flag(slot) != 0) used = slot + 1;
    }
    seg->used_.store(used, std::memory_order_release);
    return seg;
  }

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
  [[nodiscard]] std::uint32_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::uint32_t capacity() const noexcept { return capacity_; }
  [[nodiscard]] std::size_t record_bytes() const noexcept { return record_size_; }
  [[nodiscard]] SegmentHeader header() const noexcept {
    return detail::decode_header(std::span<const std::uint8_t, kHeaderSize>(base_, kHeaderSize));
  }

  /// Slots handed out so far; records live at slots [0, used()).
  [[nodiscard]] std::uint32_t used() const noexcept { return used_.load(std::memory_order_acquire); }
  [[nodiscard]] bool full() const noexcept { return used() >= capacity_; }

  [[nodiscard]] RecordFlag flag(std::uint32_t slot) const noexcept {
    return static_cast<RecordFlag>(raw_flag(slot));
  }

  [[nodiscard]] PatternId id(std::uint32_t slot) const noexcept {
    PatternId::Bytes b{};
    std::memcpy(b.data(), record(slot) + 1, b.size());
    return PatternId(b);
  }

  /// Reads one record widened to double, mapping the stored -pi sentinel
  /// back to -pi. This is the single read path used by get() and by scans.
  void read_widened(std::uint32_t slot, std::span<double> amplitude, std::span<double> phase) const noexcept {
    const std::uint8_t* a = record(slot) + 1 + PatternId::kSize;
    const std::uint8_t* f = a + 4 * static_cast<std::size_t>(dim_);
    for (std::uint32_t x = 0; x < dim_; ++x) {
      float av;
      float fv;
      std::memcpy(&av, a + 4 * static_cast<std::size_t>(x), 4);
      std::memcpy(&fv, f + 4 * static_cast<std::size_t>(x), 4);
      amplitude[x] = static_cast<double>(av);
      phase[x] = from_storage_phase(fv);
    }
  }

  /// Reads a record back as a validated pattern.
  [[nodiscard]] WavePattern read_pattern(std::uint32_t slot) const {
    std::vector<double> amp(dim_);
    std::vector<double> ph(dim_);
    read_widened(slot, amp, ph);
    try {
      return WavePattern::validate(amp, ph);
    } catch (const Error& e) {
      throw Error(ErrorCode::IoFailure, "corrupt record " + std::to_string(slot) + " of '" +
                                            path_.string() + "': " + e.what());
    }
  }

  /// Appends a record: body first, then the live flag, then the slot count.
  /// Caller holds the store's writer lock.
  std::uint32_t append(const PatternId& id, const WavePattern& p) {
    const std::uint32_t slot = used_.load(std::memory_order_relaxed);
    if (slot >= capacity_) throw Error(ErrorCode::IoFailure, "segment full");
    std::uint8_t* r = record(slot);
    std::memcpy(r + 1, id.bytes().data(), PatternId::kSize);
    std::uint8_t* a = r + 1 + PatternId::kSize;
    std::uint8_t* f = a + 4 * static_cast<std::size_t>(dim_);
    for (std::uint32_t x = 0; x < dim_; ++x) {
      const float av = to_storage_amplitude(p.amplitude()[x]);
      const float fv = to_storage_phase(p.phase()[x]);
      std::memcpy(a + 4 * x, &av, 4);
      std::memcpy(f + 4 * x, &fv, 4);
    }
    std::atomic_ref<std::uint8_t>(r[0]).store(static_cast<std::uint8_t>(RecordFlag::Live),
                                             std::memory_order_release);
    used_.store(slot + 1, std::memory_order_release);
    return slot;
  }

  void set_flag(std::uint32_t slot, RecordFlag flag) noexcept {
    std::atomic_ref<std::uint8_t>(record(slot)[0]).store(static_cast<std::uint8_t>(flag),
                                                        std::memory_order_release);
  }

  void flush() const {
    if (::msync(base_, map_size_, MS_SYNC) != 0) {
      throw Error(ErrorCode::IoFailure, detail::errno_text("msync failed for", path_));
    }
  }

  /// Best effort: write back, then ask the kernel to drop cached pages.
  void drop_page_cache() const noexcept {
    ::msync(base_, map_size_, MS_SYNC);
    ::madvise(base_, map_size_, MADV_DONTNEED);
    ::posix_fadvise(fd_.get(), 0, 0, POSIX_FADV_DONTNEED);
  }

 private:
  Segment(std::filesystem::path path, detail::FileDescriptor fd, std::uint32_t dim,
          std::uint32_t capacity)
      : path_(std::move(path)),
        fd_(std::move(fd)),
        dim_(dim),
        capacity_(capacity),
        record_size_(resonance::record_size(dim)) {}

  void map(std::size_t size) {
    void* p = ::mmap(nullptr, size, PROT_READ | PROT_WRITE, MAP_SHARED, fd_.get(), 0);
    if (p == MAP_FAILED) throw Error(ErrorCode::IoFailure, detail::errno_text("cannot map", path_));
    base_ = static_cast<std::uint8_t*>(p);
    map_size_ = size;
  }

  [[nodiscard]] std::uint8_t* record(std::uint32_t slot) const noexcept {
    return base_ + kHeaderSize + static_cast<std::size_t>(slot) * record_size_;
  }

  [[nodiscard]] std::uint8_t raw_flag(std::uint32_t slot) const noexcept {
    return std::atomic_ref<std::uint8_t>(record(slot)[0]).load(std::memory_order_acquire);
  }

  std::filesystem::path path_;
  detail::FileDescriptor fd_;
  std::uint32_t dim_;
  std::uint32_t capacity_;
  std::size_t record_size_;
  std::uint8_t* base_ = nullptr;
  std::size_t map_size_ = 0;
  std::atomic<std::uint32_t> used_{0};
};

struct RecordLocator {
  std::uint32_t segment = 0;
  std::uint32_t record = 0;

  friend bool operator==(const RecordLocator&, const RecordLocator&) = default;
};

struct LiveRecord {
  PatternId id;
  RecordLocator locator;

  friend bool operator==(const LiveRecord&, const LiveRecord&) = default;
};

/// Point-in-time view of the segments and their used slot counts. Records
/// appended later are not part of the snapshot; flags are read live.
class StoreSnapshot {
 public:
  StoreSnapshot() = default;
  StoreSnapshot(std::vector<std::shared_ptr<const Segment>> segments) : segments_(std::move(segments)) {
    offsets_.reserve(segments_.size() + 1);
    offsets_.push_back(0);
    for (const auto& s : segments_) offsets_.push_back(offsets_.back() + s->used());
  }

  [[nodiscard]] std::uint32_t dim() const noexcept {
    return segments_.empty() ? 0 : segments_.front()->dim();
  }
  [[nodiscard]] std::uint64_t total_slots() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
  [[nodiscard]] std::size_t segment_count() const noexcept { return segments_.size(); }
  [[nodiscard]] const Segment& segment(std::size_t i) const noexcept { return *segments_[i]; }
  [[nodiscard]] std::uint64_t segment_begin(std::size_t i) const noexcept { return offsets_[i]; }
  [[nodiscard]] std::uint64_t segment_end(std::size_t i) const noexcept { return offsets_[i + 1]; }

  /// Segment holding global slot `slot`.
  [[nodiscard]] std::size_t segment_of(std::uint64_t slot) const noexcept {
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), slot);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
  }

 private:
  std::vector<std::shared_ptr<const Segment>> segments_;
  std::vector<std::uint64_t> offsets_;
};

/// Directory of segments plus the in-memory id index.
class Store {
 public:
  /// Opens or creates a store of dimension `dim`. Existing segments must all
  /// have that dimension.
  Store(const std::filesystem::path& dir, std::uint32_t dim,
        std::uint32_t max_records_per_segment = kDefaultSegmentRecords)
      : dir_(dir), dim_(dim), max_records_(max_records_per_segment) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
    if (max_records_per_segment == 0) {
      throw Error(ErrorCode::InvalidArgument, "max records per segment must be at least 1");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + dir_.string() + "': " + ec.message());
    load_segments();
    if (segments_.empty()) {
      segments_.push_back(Segment::create(segment_path(0), dim_, max_records_));
      numbers_.push_back(0);
    }
  }

  /// Opens an existing store, taking dimension and segment size from disk.
  explicit Store(const std::filesystem::path& dir) : dir_(dir) {
    const auto files = list_segment_files(dir_);
    if (files.empty()) throw Error(ErrorCode::NotFound, "no store at '" + dir_.string() + "'");
    const SegmentHeader first = read_segment_header(files.front().second);
    dim_ = first.dim;
    if (dim_ == 0) throw Error(ErrorCode::CorruptHeader, "zero dimension in '" + files.front().second.string() + "'");
    load_segments();
    max_records_ = segments_.back()->capacity();
  }

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  ~Store() {
    try {
      flush();
    } catch (...) {
    }
  }

  [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }
  [[nodiscard]] std::uint32_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::uint32_t max_records_per_segment() const noexcept { return max_records_; }

  [[nodiscard]] std::size_t size() const {
    std::shared_lock lock(mutex_);
    return index_.size();
  }

  [[nodiscard]] std::size_t segment_count() const {
    std::shared_lock lock(mutex_);
    return segments_.size();
  }

  [[nodiscard]] std::vector<std::filesystem::path> segment_paths() const {
    std::shared_lock lock(mutex_);
    std::vector<std::filesystem::path> out;
    for (const auto& s : segments_) out.push_back(s->path());
    return out;
  }

  [[nodiscard]] bool contains(const PatternId& id) const {
    std::shared_lock lock(mutex_);
    return index_.contains(id);
  }

  void insert(const PatternId& id, const WavePattern& p) {
    if (p.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "pattern has dimension " + std::to_string(p.size()) +
                                                    ", store has " + std::to_string(dim_));
    }
    for (std::size_t x = 0; x < p.size(); ++x) {
      if (!std::isfinite(to_storage_amplitude(p.amplitude()[x]))) {
        throw Error(ErrorCode::NonFiniteValue, "amplitude overflows float32 at index " + std::to_string(x));
      }
    }
    std::unique_lock lock(mutex_);
    if (index_.contains(id)) throw Error(ErrorCode::DuplicateId, id.to_hex());
    if (segments_.back()->full()) {
      const std::uint32_t number = numbers_.back() + 1;
      segments_.push_back(Segment::create(segment_path(number), dim_, max_records_));
      numbers_.push_back(number);
    }
    const auto seg = static_cast<std::uint32_t>(segments_.size() - 1);
    const std::uint32_t slot = segments_.back()->append(id, p);
    index_.emplace(id, RecordLocator{seg, slot});
  }

  [[nodiscard]] WavePattern get(const PatternId& id) const {
    std::shared_lock lock(mutex_);
    const auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::NotFound, id.to_hex());
    return segments_[it->second.segment]->read_pattern(it->second.record);
  }

  /// Marks the record as a tombstone and drops it from the index.
  void remove(const PatternId& id) {
    std::unique_lock lock(mutex_);
    const auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::NotFound, id.to_hex());
    segments_[it->second.segment]->set_flag(it->second.record, RecordFlag::Tombstone);
    index_.erase(it);
  }

  /// Live records in (segment, record) order.
  [[nodiscard]] std::vector<LiveRecord> scan_live() const {
    const StoreSnapshot snap = snapshot();
    std::vector<LiveRecord> out;
    for (std::size_t s = 0; s < snap.segment_count(); ++s) {
      const Segment& seg = snap.segment(s);
      const auto n = static_cast<std::uint32_t>(snap.segment_end(s) - snap.segment_begin(s));
      for (std::uint32_t r = 0; r < n; ++r) {
        if (seg.flag(r) == RecordFlag::Live) {
          out.push_back({seg.id(r), {static_cast<std::uint32_t>(s), r}});
        }
      }
    }
    return out;
  }

  [[nodiscard]] StoreSnapshot snapshot() const {
    std::shared_lock lock(mutex_);
    return StoreSnapshot(std::vector<std::shared_ptr<const Segment>>(segments_.begin(), segments_.end()));
  }

  /// Id -> locator for every live record.
  [[nodiscard]] std::unordered_map<PatternId, RecordLocator> index() const {
    std::shared_lock lock(mutex_);
    return index_;
  }

  void flush() const {
    std::shared_lock lock(mutex_);
    for (const auto& s : segments_) s->flush();
  }

  void drop_page_cache() const {
    std::shared_lock lock(mutex_);
    for (const auto& s : segments_) s->drop_page_cache();
  }

  /// Segment files in `dir`, ordered by their number.
  [[nodiscard]] static std::vector<std::pair<std::uint32_t, std::filesystem::path>> list_segment_files(
      const std::filesystem::path& dir) {
    std::vector<std::pair<std::uint32_t, std::filesystem::path>> out;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) return out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.size() != 14 || !name.starts_with("seg-") || !name.ends_with(".rdb")) continue;
      const std::string digits = name.substr(4, 6);
      if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
      out.emplace_back(static_cast<std::uint32_t>(std::stoul(digits)), entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  [[nodiscard]] static std::string segment_file_name(std::uint32_t number) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "seg-%06u.rdb", number);
    return buf;
  }

 private:
  [[nodiscard]] std::filesystem::path segment_path(std::uint32_t number) const {
    return dir_ / segment_file_name(number);
  }

  void load_segments() {
    for (const auto& [number, path] : list_segment_files(dir_)) {
      auto seg = Segment::open(path);
      if (seg->dim() != dim_) {
        throw Error(ErrorCode::DimMismatch, "segment '" + path.string() + "' has dimension " +
                                                std::to_string(seg->dim()) + ", expected " +
                                                std::to_string(dim_));
      }
      const auto s = static_cast<std::uint32_t>(segments_.size());
      for (std::uint32_t r = 0; r < seg->used(); ++r) {
        if (seg->flag(r) != RecordFlag::Live) continue;
        if (!index_.emplace(seg->id(r), RecordLocator{s, r}).second) {
          throw Error(ErrorCode::CorruptHeader, "id " + seg->id(r).to_hex() + " is live twice");
        }
      }
      segments_.push_back(std::move(seg));
      numbers_.push_back(number);
    }
  }

  std::filesystem::path dir_;
  std::uint32_t dim_ = 0;
  std::uint32_t max_records_ = kDefaultSegmentRecords;
  mutable std::shared_mutex mutex_;
  std::vector<std::shared_ptr<Segment>> segments_;
  std::vector<std::uint32_t> numbers_;
  std::unordered_map<PatternId, RecordLocator> index_;
};

}  // namespace resonance
