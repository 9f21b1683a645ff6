#include "synchart/image.hpp"

#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <jpeglib.h>

#include <fmt/format.h>

#include "synchart/error.hpp"

namespace synchart {

namespace {

struct ErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX] = {0};
    bool warned = false;
};

void on_error(j_common_ptr cinfo)
{
    auto* err = reinterpret_cast<ErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Level -1 is a warning (e.g. premature end of data); libjpeg would silently
// pad the image, so remember it and fail the check.
void on_message(j_common_ptr cinfo, int level)
{
    auto* err = reinterpret_cast<ErrorMgr*>(cinfo->err);
    if (level < 0 && !err->warned) {
        err->warned = true;
        (*cinfo->err->format_message)(cinfo, err->message);
    }
}

ImageCheck fail(std::string problem)
{
    return {std::nullopt, std::move(problem)};
}

}  // namespace

ImageCheck validate_image(std::string_view bytes)
{
    if (bytes.size() < 4) return fail("no image data");
    jpeg_decompress_struct cinfo{};
    ErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = on_error;
    err.pub.emit_message = on_message;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        return fail(fmt::format("corrupt JPEG: {}", err.message));
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_GRAYSCALE;
    jpeg_start_decompress(&cinfo);
    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);
    std::vector<unsigned char> row(static_cast<std::size_t>(w));
    double sum = 0.0, sum_sq = 0.0;
    while (cinfo.output_scanline < cinfo.output_height) {
        unsigned char* ptr = row.data();
        jpeg_read_scanlines(&cinfo, &ptr, 1);
        for (unsigned char px : row) {
            sum += px;
            sum_sq += static_cast<double>(px) * px;
        }
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    if (err.warned) return fail(fmt::format("damaged JPEG: {}", err.message));
    if (w < kMinImageSide || h < kMinImageSide) return fail(fmt::format("image too small: {}x{}", w, h));
    const double n = static_cast<double>(w) * h;
    const double mean = sum / n;
    const double variance = sum_sq / n - mean * mean;
    if (variance < kBlankVarianceThreshold) return fail("image is blank");
    return {ImageMeta{w, h, bytes.size(), variance}, {}};
}

ImageCheck validate_image_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return validate_image(ss.str());
}

Raster::Raster(int w, int h, std::uint8_t fill)
    : width(w), height(h), rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, fill)
{
}

void Raster::fill_rect(int x0, int y0, int x1, int y1, std::uint32_t color)
{
    x0 = std::max(0, x0);
    y0 = std::max(0, y0);
    x1 = std::min(width, x1);
    y1 = std::min(height, y1);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            auto* px = &rgb[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3];
            px[0] = static_cast<std::uint8_t>(color >> 16);
            px[1] = static_cast<std::uint8_t>(color >> 8);
            px[2] = static_cast<std::uint8_t>(color);
        }
    }
}

std::string encode_jpeg(const Raster& raster, int quality)
{
    jpeg_compress_struct cinfo{};
    ErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = on_error;
    unsigned char* buffer = nullptr;
    unsigned long size = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        std::free(buffer);
        throw Error(ErrorCode::IoFailure, fmt::format("JPEG encoding failed: {}", err.message));
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &buffer, &size);
    cinfo.image_width = static_cast<JDIMENSION>(raster.width);
    cinfo.image_height = static_cast<JDIMENSION>(raster.height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        auto* row = const_cast<unsigned char*>(&raster.rgb[static_cast<std::size_t>(cinfo.next_scanline) *
                                                            static_cast<std::size_t>(raster.width) * 3]);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    std::string out(reinterpret_cast<char*>(buffer), size);
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    return out;
}

}  // namespace synchart
