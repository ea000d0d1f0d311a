// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_IDX_HPP
#define LABELNOISE_IDX_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "labelnoise/binary_io.hpp"
#include "labelnoise/dataset.hpp"

namespace labelnoise {

struct RawDigits {
    std::size_t image_rows = 0, image_cols = 0;
    Matrix pixels;                    // one row per image, values in [0,1]
    std::vector<std::uint8_t> labels; // 0..9
};

namespace detail {

inline std::uint32_t read_be32(std::istream& is, std::size_t offset, const std::string& path) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    if (!is)
        throw io::FormatError(path + ": truncated at offset " + std::to_string(offset));
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

inline void write_be32(std::ostream& os, std::uint32_t v) {
    unsigned char buf[4] = {static_cast<unsigned char>(v >> 24),
                            static_cast<unsigned char>(v >> 16),
                            static_cast<unsigned char>(v >> 8),
                            static_cast<unsigned char>(v)};
    os.write(reinterpret_cast<const char*>(buf), 4);
}

}  // namespace detail

/// Big-endian IDX pair: image file (magic 0x00000803) and label file
/// (magic 0x00000801). Pixels are scaled to [0,1] by division by 255.
inline RawDigits load_idx(const std::string& images_path, const std::string& labels_path) {
    auto imgs = io::open_in(images_path);
    const std::uint32_t img_magic = detail::read_be32(imgs, 0, images_path);
    if (img_magic != 0x00000803u)
        throw io::FormatError(images_path + ": bad magic 0x" + std::to_string(img_magic) +
                              " at offset 0 (expected 0x00000803)");
    const std::uint32_t n_images = detail::read_be32(imgs, 4, images_path);
    const std::uint32_t n_rows = detail::read_be32(imgs, 8, images_path);
    const std::uint32_t n_cols = detail::read_be32(imgs, 12, images_path);

    auto lbls = io::open_in(labels_path);
    const std::uint32_t lbl_magic = detail::read_be32(lbls, 0, labels_path);
    if (lbl_magic != 0x00000801u)
        throw io::FormatError(labels_path + ": bad magic at offset 0 (expected 0x00000801)");
    const std::uint32_t n_labels = detail::read_be32(lbls, 4, labels_path);
    if (n_labels != n_images)
        throw io::FormatError(labels_path + ": label count " + std::to_string(n_labels) +
                              " != image count " + std::to_string(n_images));

    RawDigits out;
    out.image_rows = n_rows;
    out.image_cols = n_cols;
    const std::size_t feat = std::size_t(n_rows) * n_cols;
    out.pixels = Matrix(n_images, feat);
    std::vector<unsigned char> buf(feat);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        imgs.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(feat));
        if (!imgs)
            throw io::FormatError(images_path + ": truncated payload at offset " +
                                  std::to_string(16 + std::size_t(i) * feat));
        for (std::size_t k = 0; k < feat; ++k)
            out.pixels(i, k) = static_cast<double>(buf[k]) / 255.0;
    }
    out.labels.resize(n_images);
    lbls.read(reinterpret_cast<char*>(out.labels.data()), n_images);
    if (!lbls)
        throw io::FormatError(labels_path + ": truncated payload at offset 8");
    for (std::uint32_t i = 0; i < n_images; ++i)
        if (out.labels[i] > 9)
            throw io::FormatError(labels_path + ": label " + std::to_string(out.labels[i]) +
                                  " out of range at offset " + std::to_string(8 + i));
    return out;
}

/// Writes an IDX pair from byte-valued pixel rows (values in [0,1] are
/// rescaled to 0..255 exactly as the loader inverts them).
inline void save_idx(const std::string& images_path, const std::string& labels_path,
                     const Matrix& pixels, const std::vector<std::uint8_t>& labels,
                     std::size_t image_rows, std::size_t image_cols) {
    if (pixels.rows() != labels.size())
        throw std::invalid_argument("save_idx: image/label counts disagree");
    if (pixels.cols() != image_rows * image_cols)
        throw std::invalid_argument("save_idx: pixel width != rows*cols");
    auto imgs = io::open_out(images_path);
    detail::write_be32(imgs, 0x00000803u);
    detail::write_be32(imgs, static_cast<std::uint32_t>(pixels.rows()));
    detail::write_be32(imgs, static_cast<std::uint32_t>(image_rows));
    detail::write_be32(imgs, static_cast<std::uint32_t>(image_cols));
    std::vector<unsigned char> buf(pixels.cols());
    for (std::size_t i = 0; i < pixels.rows(); ++i) {
        for (std::size_t k = 0; k < pixels.cols(); ++k) {
            double v = pixels(i, k) * 255.0;
            if (v < 0.0) v = 0.0;
            if (v > 255.0) v = 255.0;
            buf[k] = static_cast<unsigned char>(v + 0.5);
        }
        imgs.write(reinterpret_cast<const char*>(buf.data()),
                   static_cast<std::streamsize>(buf.size()));
    }
    auto lbls = io::open_out(labels_path);
    detail::write_be32(lbls, 0x00000801u);
    detail::write_be32(lbls, static_cast<std::uint32_t>(labels.size()));
    lbls.write(reinterpret_cast<const char*>(labels.data()),
               static_cast<std::streamsize>(labels.size()));
}

/// Binary regrouping: digits 0-3 become class 0, digits 4-9 class 1.
inline LabeledDataset binarize_mnist(const RawDigits& raw, SampleId id_offset = 0) {
    LabeledDataset ds;
    ds.class_count = 2;
    ds.features = raw.pixels;
    ds.labels = Matrix(raw.labels.size(), 2);
    ds.ids.reserve(raw.labels.size());
    ds.ground_truth.reserve(raw.labels.size());
    for (std::size_t i = 0; i < raw.labels.size(); ++i) {
        const std::size_t cls = raw.labels[i] <= 3 ? 0 : 1;
        ds.labels(i, cls) = 1.0;
        ds.ground_truth.push_back(cls);
        ds.ids.push_back(id_offset + i);
    }
    return ds;
}

}  // namespace labelnoise

#endif
