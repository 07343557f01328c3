#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <system_error>

#include "cubewaring/error.hpp"
#include "cubewaring/io.hpp"

namespace cubewaring::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "cache payload counts are stored in native order, which must be little-endian");

template <class T>
void put_le(std::uint8_t* out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out[i] = static_cast<std::uint8_t>(v >> (8U * i));
}

template <class T>
T get_le(const std::uint8_t* in) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(in[i]) << (8U * i);
  return v;
}

class Mapping {
 public:
  Mapping(void* base, std::size_t size) : base_(base), size_(size) {}
  Mapping(const Mapping&) = delete;
  Mapping& operator=(const Mapping&) = delete;
  ~Mapping() {
    if (base_ != nullptr) munmap(base_, size_);
  }
  [[nodiscard]] const std::uint8_t* data() const { return static_cast<const std::uint8_t*>(base_); }

 private:
  void* base_;
  std::size_t size_;
};

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() {
    if (fd_ >= 0) close(fd_);
  }
  [[nodiscard]] int get() const { return fd_; }

 private:
  int fd_;
};

}  // namespace

std::array<std::uint8_t, kCacheHeaderSize> encode_header(const CacheHeader& h) {
  std::array<std::uint8_t, kCacheHeaderSize> out{};
  std::memcpy(out.data(), kCacheMagic.data(), 4);
  put_le<std::uint32_t>(out.data() + 4, kCacheVersion);
  put_le<u64>(out.data() + 8, h.limit);
  put_le<std::uint32_t>(out.data() + 16, h.counts ? kFlagCounts : 0U);
  return out;
}

CacheHeader decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kCacheHeaderSize) throw ValidationError("cache file: truncated header");
  if (std::memcmp(bytes.data(), kCacheMagic.data(), 4) != 0) throw ValidationError("cache file: bad magic");
  const auto version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kCacheVersion) throw ValidationError("cache file: unsupported version");
  const auto flags = get_le<std::uint32_t>(bytes.data() + 16);
  if ((flags & ~kFlagCounts) != 0) throw ValidationError("cache file: unknown flag bits");
  return {get_le<u64>(bytes.data() + 8), (flags & kFlagCounts) != 0};
}

void save_cache(const cubes::CubeCache& cache, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cache file: cannot open " + tmp.string());
    const auto header = encode_header({cache.limit(), cache.has_counts()});
    out.write(reinterpret_cast<const char*>(header.data()), header.size());
    const auto bits = cache.membership_bytes();
    out.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
    if (cache.has_counts()) {
      const auto counts = cache.count_bytes();
      out.write(reinterpret_cast<const char*>(counts.data()), static_cast<std::streamsize>(counts.size()));
    }
    if (!out) throw ResourceError("cache file: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

cubes::CubeCache load_cache(const std::filesystem::path& path) {
  Fd fd(open(path.c_str(), O_RDONLY | O_CLOEXEC));
  if (fd.get() < 0) throw ValidationError("cache file: cannot open " + path.string());
  struct stat st {};
  if (fstat(fd.get(), &st) != 0) throw ResourceError("cache file: cannot stat " + path.string());
  const auto size = static_cast<std::size_t>(st.st_size);
  if (size < kCacheHeaderSize) throw ValidationError("cache file: truncated header");
  void* base = mmap(nullptr, size, PROT_READ, MAP_PRIVATE, fd.get(), 0);
  if (base == MAP_FAILED) throw ResourceError("cache file: mmap failed for " + path.string());
  auto mapping = std::make_shared<Mapping>(base, size);
  const CacheHeader h = decode_header({mapping->data(), kCacheHeaderSize});
  if (size != kCacheHeaderSize + cubes::CubeCache::payload_size(h.limit, h.counts)) {
    throw ValidationError("cache file: payload size does not match the header");
  }
  return cubes::CubeCache::from_payload(h.limit, h.counts, mapping->data() + kCacheHeaderSize, mapping);
}

std::filesystem::path cache_dir(const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(std::string(kCacheDirEnv).c_str()); env != nullptr && *env != '\0') {
    return env;
  }
  return ".cubewaring";
}

std::filesystem::path cache_file_name(u64 X, bool counts) {
  return "c3cb-" + std::to_string(X) + (counts ? "-counts" : "") + ".bin";
}

CacheLookup load_or_build(u64 X, bool counts, const std::filesystem::path& dir, unsigned threads) {
  CacheLookup out;
  for (bool with : {true, false}) {
    if (counts && !with) break;
    const auto p = dir / cache_file_name(X, with);
    if (std::filesystem::exists(p)) {
      out.cache = load_cache(p);
      out.path = p;
      out.loaded = true;
      return out;
    }
  }
  out.cache = cubes::build_cube_cache(X, counts, threads);
  out.path = dir / cache_file_name(X, counts);
  save_cache(out.cache, out.path);
  return out;
}

}  // namespace cubewaring::io
