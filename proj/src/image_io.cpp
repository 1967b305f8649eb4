#include "ctseg/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <png.h>

#include "ctseg/errors.hpp"

namespace ctseg {

namespace fs = std::filesystem;

namespace {

constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

// ---------------------------------------------------------------- P5 graymap

class P5Parser {
 public:
  explicit P5Parser(const fs::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw DataError("cannot open " + path.string());
  }

  Raster parse() {
    expect_magic();
    const long width = next_int("width");
    const long height = next_int("height");
    const long maxval = next_int("maxval");
    if (width < 1 || height < 1 || width > 1000000 || height > 1000000) {
      throw DataError(path_.string() + ": invalid P5 dimensions " + std::to_string(width) + "x" +
                      std::to_string(height));
    }
    if (maxval != 255) {
      throw DataError(path_.string() + ": unsupported P5 maxval " + std::to_string(maxval) +
                      " (only 8-bit, maxval 255)");
    }
    // exactly one whitespace byte separates the header from the pixel data
    const int sep = get();
    if (sep == EOF || !std::isspace(sep)) {
      throw DataError(path_.string() + ": malformed P5 header at byte offset " +
                      std::to_string(offset_ - 1));
    }

    Raster img(static_cast<int>(width), static_cast<int>(height), 0);
    in_.read(reinterpret_cast<char*>(img.pixels().data()),
             static_cast<std::streamsize>(img.size()));
    const std::streamsize got = in_.gcount();
    if (got < static_cast<std::streamsize>(img.size())) {
      throw DataError(path_.string() + ": truncated P5 pixel data, file ends at byte offset " +
                      std::to_string(offset_ + got) + " but " +
                      std::to_string(offset_ + static_cast<long>(img.size())) + " bytes expected");
    }
    return img;
  }

 private:
  int get() {
    const int ch = in_.get();
    if (ch != EOF) ++offset_;
    return ch;
  }

  void expect_magic() {
    const int p = get();
    const int five = get();
    if (p != 'P' || five != '5') {
      throw DataError(path_.string() + ": not a binary portable graymap (bad magic)");
    }
  }

  // Skips whitespace and '#' comments, then reads one decimal token.
  long next_int(const char* what) {
    int ch = get();
    while (ch != EOF) {
      if (ch == '#') {
        while (ch != EOF && ch != '\n') ch = get();
      } else if (std::isspace(ch)) {
        ch = get();
      } else {
        break;
      }
    }
    if (ch == EOF || !std::isdigit(ch)) {
      throw DataError(path_.string() + ": malformed P5 header, expected " + std::string(what) +
                      " at byte offset " + std::to_string(offset_ == 0 ? 0 : offset_ - 1));
    }
    long value = 0;
    while (ch != EOF && std::isdigit(ch)) {
      value = value * 10 + (ch - '0');
      if (value > 100000000L) {
        throw DataError(path_.string() + ": P5 header value out of range");
      }
      ch = get();
    }
    if (ch != EOF) {
      in_.unget();
      --offset_;
    }
    return value;
  }

  fs::path path_;
  std::ifstream in_;
  long offset_ = 0;
};

void write_p5(const Raster& img, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()),
            static_cast<std::streamsize>(img.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

// ------------------------------------------------------------------- libpng

struct FileHandle {
  std::FILE* fp = nullptr;
  ~FileHandle() {
    if (fp) std::fclose(fp);
  }
};

void png_error_to_buffer(png_structp png, png_const_charp msg) {
  char* buf = static_cast<char*>(png_get_error_ptr(png));
  std::strncpy(buf, msg, 255);
  buf[255] = '\0';
  longjmp(png_jmpbuf(png), 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

Raster read_png(const fs::path& path) {
  FileHandle file;
  file.fp = std::fopen(path.string().c_str(), "rb");
  if (!file.fp) throw DataError("cannot open " + path.string());

  char errbuf[256] = {0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, errbuf, png_error_to_buffer,
                                           png_warning_ignore);
  if (!png) throw DataError("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DataError("libpng initialization failed");
  }

  Raster img;
  std::vector<png_bytep> rows;
  volatile bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, file.fp);
    png_read_info(png, info);
    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth != 8 || color_type != PNG_COLOR_TYPE_GRAY) {
      png_destroy_read_struct(&png, &info, nullptr);
      throw DataError(path.string() + ": PNG must be 8-bit grayscale (got bit depth " +
                      std::to_string(bit_depth) + ", color type " + std::to_string(color_type) +
                      ")");
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    img = Raster(static_cast<int>(width), static_cast<int>(height), 0);
    rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r) {
      rows[r] = img.pixels().data() + static_cast<std::size_t>(r) * width;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (failed) {
    throw DataError(path.string() + ": malformed PNG (" + errbuf + ")");
  }
  return img;
}

void write_png(const Raster& img, const fs::path& path) {
  FileHandle file;
  file.fp = std::fopen(path.string().c_str(), "wb");
  if (!file.fp) throw DataError("cannot write " + path.string());

  char errbuf[256] = {0};
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, errbuf, png_error_to_buffer,
                                            png_warning_ignore);
  if (!png) throw DataError("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError("libpng initialization failed");
  }

  std::vector<png_bytep> rows(img.height());
  // rows point into const data; libpng does not modify them on write
  for (int r = 0; r < img.height(); ++r) {
    rows[r] = const_cast<png_bytep>(img.pixels().data() + static_cast<std::size_t>(r) * img.width());
  }

  volatile bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, file.fp);
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  if (failed) {
    throw DataError(path.string() + ": PNG write failed (" + errbuf + ")");
  }
}

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".pnm" || ext == ".png";
}

void check_manifest_filename(const std::string& name, const fs::path& manifest) {
  if (name.empty() || fs::path(name).is_absolute() || name.find("..") != std::string::npos) {
    throw DataError(manifest.string() + ": filename '" + name +
                    "' does not resolve under the dataset directory");
  }
}

}  // namespace

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());

  DatasetManifest manifest;
  std::set<int> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'acq_index<TAB>filename[<TAB>truth_filename]'");
    }

    ManifestEntry entry;
    try {
      std::size_t pos = 0;
      entry.acq_index = std::stoi(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad acq_index '" +
                      fields[0] + "'");
    }
    if (entry.acq_index < 0) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": acq_index must be >= 0");
    }
    if (!seen.insert(entry.acq_index).second) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": duplicate acq_index " +
                      std::to_string(entry.acq_index));
    }
    entry.filename = fields[1];
    check_manifest_filename(entry.filename, path);
    if (fields.size() == 3 && !fields[2].empty()) {
      check_manifest_filename(fields[2], path);
      entry.truth_filename = fields[2];
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) {
    throw DataError(path.string() + ": manifest lists no slices");
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.acq_index < b.acq_index; });
  return manifest;
}

GraySlice read_image(const fs::path& path) {
  unsigned char magic[8] = {0};
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    in.read(reinterpret_cast<char*>(magic), sizeof(magic));
  }
  if (std::memcmp(magic, kPngMagic, sizeof(kPngMagic)) == 0) {
    return GraySlice{read_png(path), 0};
  }
  if (magic[0] == 'P' && magic[1] == '5') {
    return GraySlice{P5Parser(path).parse(), 0};
  }
  throw DataError(path.string() + ": unsupported image format (header bytes " +
                  std::to_string(magic[0]) + " " + std::to_string(magic[1]) + ")");
}

void write_image(const Raster& image, const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm" || ext == ".pnm") {
    write_p5(image, path);
  } else if (ext == ".png") {
    write_png(image, path);
  } else {
    throw DataError("unsupported output extension '" + ext + "' for " + path.string());
  }
}

void write_image_atomic(const Raster& image, const fs::path& path) {
  const fs::path tmp = path.parent_path() / (".tmp_" + path.filename().string());
  write_image(image, tmp);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError("cannot replace " + path.string() + ": " + ec.message());
  }
}

LoadedDataset load_dataset(const fs::path& dir, const std::optional<fs::path>& manifest_path) {
  if (!fs::is_directory(dir)) {
    throw DataError(dir.string() + " is not a directory");
  }

  std::vector<std::pair<int, std::string>> ordered;  // (acq_index, filename)
  if (manifest_path) {
    const DatasetManifest manifest = read_manifest(*manifest_path);
    for (const ManifestEntry& e : manifest.entries) {
      ordered.emplace_back(e.acq_index, e.filename);
    }
  } else {
    std::vector<std::string> names;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && has_image_extension(entry.path())) {
        names.push_back(entry.path().filename().string());
      }
    }
    std::sort(names.begin(), names.end());
    for (std::size_t i = 0; i < names.size(); ++i) {
      ordered.emplace_back(static_cast<int>(i), names[i]);
    }
  }
  if (ordered.empty()) {
    throw DataError("no grayscale images found in " + dir.string());
  }

  LoadedDataset loaded;
  loaded.dataset.source_id = dir.filename().string();
  for (const auto& [acq, name] : ordered) {
    GraySlice slice = read_image(dir / name);
    slice.acq_index = acq;
    if (!loaded.dataset.slices.empty() &&
        !slice.image.same_shape(loaded.dataset.slices.front().image)) {
      throw DataError(dir.string() + ": dimension mismatch, " + name + " is " +
                      std::to_string(slice.image.width()) + "x" +
                      std::to_string(slice.image.height()) + " but " + loaded.filenames.front() +
                      " is " + std::to_string(loaded.dataset.slices.front().image.width()) + "x" +
                      std::to_string(loaded.dataset.slices.front().image.height()));
    }
    loaded.dataset.slices.push_back(std::move(slice));
    loaded.filenames.push_back(name);
  }
  validate_dataset(loaded.dataset);
  return loaded;
}

}  // namespace ctseg
