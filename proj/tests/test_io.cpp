#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hexkit/io/binary.hpp"
#include "hexkit/io/dataset.hpp"
#include "hexkit/io/errors.hpp"
#include "hexkit/io/hexa_file.hpp"
#include "hexkit/io/idx.hpp"
#include "hexkit/io/image_io.hpp"
#include "hexkit/nn/model.hpp"
#include "support.hpp"

using namespace hexkit;
using namespace hexkit::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void put_be32(std::vector<uint8_t>& b, uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) b.push_back(static_cast<uint8_t>(v >> s));
}

// Four 3x2 images whose pixel (x, y) of image k is 10k + 3y + x.
std::vector<uint8_t> idx_image_fixture() {
    std::vector<uint8_t> b{0, 0, 8, 3};
    put_be32(b, 4);
    put_be32(b, 2);
    put_be32(b, 3);
    for (int k = 0; k < 4; ++k)
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 3; ++x) b.push_back(static_cast<uint8_t>(10 * k + 3 * y + x));
    return b;
}

std::vector<uint8_t> idx_label_fixture(uint32_t count) {
    std::vector<uint8_t> b{0, 0, 8, 1};
    put_be32(b, count);
    for (uint32_t i = 0; i < count; ++i) b.push_back(static_cast<uint8_t>((7 * i) % 10));
    return b;
}

template <typename F>
uint64_t format_error_offset(F&& f) {
    try {
        f();
    } catch (const FormatError& e) {
        return e.offset();
    }
    FAIL("expected FormatError");
    return 0;
}

}  // namespace

TEST_CASE("byte reader and writer") {
    ByteWriter w;
    w.bytes("AB");
    w.le<uint16_t>(0x1234);
    w.be<uint32_t>(0xdeadbeef);
    w.le<double>(-1.25);
    const auto bytes = w.take();
    CHECK(bytes[2] == 0x34);
    CHECK(bytes[3] == 0x12);
    CHECK(bytes[4] == 0xde);
    ByteReader r(bytes);
    CHECK(r.bytes(2, "tag") == "AB");
    CHECK(r.le<uint16_t>("u16") == 0x1234);
    CHECK(r.be<uint32_t>("u32") == 0xdeadbeef);
    CHECK(r.le<double>("f64") == -1.25);
    CHECK(r.remaining() == 0);
    CHECK(format_error_offset([&] { r.le<uint8_t>("past end"); }) == 16);
}

TEST_CASE("IDX fixture decodes") {
    const auto images = decode_idx_images(idx_image_fixture());
    REQUIRE(images.size() == 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(images[k].width() == 3);
        CHECK(images[k].height() == 2);
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 3; ++x) CHECK(images[k](x, y) == 10 * k + 3 * y + x);
    }
    CHECK(decode_idx_labels(idx_label_fixture(4)) == std::vector<int>{0, 7, 4, 1});
    CHECK(encode_idx_images(images) == idx_image_fixture());
    CHECK(encode_idx_labels({0, 7, 4, 1}) == idx_label_fixture(4));
}

TEST_CASE("IDX errors carry byte offsets") {
    CHECK(format_error_offset([] { decode_idx_images({}); }) == 0);
    CHECK(format_error_offset([] { decode_idx_labels({}); }) == 0);
    auto wrong = idx_image_fixture();
    wrong[3] = 1;
    CHECK(format_error_offset([&] { decode_idx_images(wrong); }) == 0);
    CHECK_THROWS_AS(decode_idx_labels(idx_image_fixture()), FormatError);

    auto cut = idx_image_fixture();
    cut.resize(cut.size() - 1);
    CHECK_THROWS_AS(decode_idx_images(cut), FormatError);
    auto header_only = idx_image_fixture();
    header_only.resize(10);
    CHECK(format_error_offset([&] { decode_idx_images(header_only); }) == 8);

    TempDir dir("hexkit_idx_test");
    write_file(dir.path / "img", idx_image_fixture());
    write_file(dir.path / "lbl5", idx_label_fixture(5));
    write_file(dir.path / "lbl4", idx_label_fixture(4));
    CHECK_THROWS_AS(ingest_mnist(dir.path / "img", dir.path / "lbl5"), FormatError);
    const auto ok = ingest_mnist(dir.path / "img", dir.path / "lbl4");
    CHECK(ok.images.size() == 4);
    CHECK(ok.labels.size() == 4);
    CHECK_THROWS_AS(ingest_mnist(dir.path / "missing", dir.path / "lbl4"), IoError);
}

TEST_CASE("HexaFile round trip is bitwise") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1e3);
    HexArray<double> hex(HexGridSpec(5, 7, 1.37), 3);
    for (int64_t i = 0; i < hex.data().size(); ++i) hex.data()[i] = n(rng);
    hex.data()[0] = -0.0;
    hex.data()[1] = std::numeric_limits<double>::denorm_min();
    const auto bytes = encode_hexa(hex);
    CHECK(bytes.size() == 4 + 2 + 4 + 4 + 2 + 8 + 5 * 7 * 3 * 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "HEXA");
    const auto back = decode_hexa(bytes);
    CHECK(back.spec().rows() == 5);
    CHECK(back.spec().cols() == 7);
    CHECK(back.spec().pitch() == hex.spec().pitch());
    CHECK(back.channels() == 3);
    CHECK(std::memcmp(back.data().data(), hex.data().data(), sizeof(double) * 105) == 0);
    CHECK(encode_hexa(back) == bytes);

    TempDir dir("hexkit_hexa_test");
    write_hexa(dir.path / "a.hexa", hex);
    CHECK(encode_hexa(read_hexa(dir.path / "a.hexa")) == bytes);

    auto bad = bytes;
    bad[0] = 'X';
    CHECK(format_error_offset([&] { decode_hexa(bad); }) == 0);
    auto version = bytes;
    version[4] = 9;
    CHECK(format_error_offset([&] { decode_hexa(version); }) == 4);
    auto cut = bytes;
    cut.resize(cut.size() - 3);
    CHECK_THROWS_AS(decode_hexa(cut), FormatError);
    auto extra = bytes;
    extra.push_back(0);
    CHECK_THROWS_AS(decode_hexa(extra), FormatError);
    CHECK_THROWS_AS(read_hexa(dir.path / "nope.hexa"), IoError);
}

TEST_CASE("image files round trip") {
    std::mt19937_64 rng(2);
    TempDir dir("hexkit_image_test");
    for (int64_t ch : {1, 3}) {
        const Image img = testsupport::random_image(13, 9, rng, ch);
        for (const char* ext : {".png", ch == 1 ? ".pgm" : ".ppm"}) {
            const fs::path p = dir.path / (std::string("img") + std::to_string(ch) + ext);
            write_image(p, img);
            const Image back = read_image(p);
            CHECK(back.width() == 13);
            CHECK(back.height() == 9);
            CHECK(back.channels() == ch);
            CHECK((back.data() == img.data()).all());
        }
    }
    const Image gray = testsupport::random_image(4, 3, rng);
    CHECK((decode_pnm(encode_pnm(gray)).data() == gray.data()).all());
    CHECK_THROWS_AS(decode_pnm({'P', '2', '\n'}), FormatError);
    CHECK_THROWS_AS(read_image(dir.path / "missing.png"), IoError);
    std::ofstream(dir.path / "junk.png") << "not an image";
    CHECK_THROWS(read_image(dir.path / "junk.png"));
}

TEST_CASE("image directory ingestion") {
    TempDir dir("hexkit_dataset_test");
    std::mt19937_64 rng(3);
    for (const char* cls : {"cats", "ants", "bees"}) {
        fs::create_directories(dir.path / cls);
        for (int i = 0; i < 6; ++i)
            write_image(dir.path / cls / ("s" + std::to_string(i) + ".pgm"), testsupport::random_image(5, 4, rng));
    }
    std::ofstream(dir.path / "ants" / "notes.txt") << "ignored";
    const auto ds = ingest_image_dir(dir.path);
    CHECK(ds.classes == std::vector<std::string>{"ants", "bees", "cats"});
    CHECK(ds.size() == 18);
    CHECK(ds.labels.front() == 0);
    CHECK(ds.labels.back() == 2);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(ds.is_test[i] == hashed_test_split(ds.names[i]));

    // The split is a pure function of the name and takes roughly a fifth.
    int test = 0;
    for (int i = 0; i < 5000; ++i) test += hashed_test_split("class/file" + std::to_string(i) + ".png");
    CHECK(test > 800);
    CHECK(test < 1200);
    CHECK(hashed_test_split("a/b.png") == hashed_test_split("a/b.png"));

    TempDir split("hexkit_dataset_split");
    for (const char* part : {"train", "test"})
        for (const char* cls : {"x", "y"}) {
            fs::create_directories(split.path / part / cls);
            write_image(split.path / part / cls / "a.png", testsupport::random_image(3, 3, rng));
        }
    const auto sds = ingest_image_dir(split.path);
    CHECK(sds.size() == 4);
    CHECK(std::count(sds.is_test.begin(), sds.is_test.end(), true) == 2);

    TempDir empty("hexkit_dataset_empty");
    CHECK_THROWS_AS(ingest_image_dir(empty.path), IoError);
    CHECK_THROWS_AS(ingest_image_dir(empty.path / "missing"), IoError);
}

TEST_CASE("network inputs from images") {
    std::vector<Image> images{Image(28, 28, 1, 255.0), Image(28, 28, 1, 0.0)};
    const std::vector<int> labels{3, 1};
    const auto hex = to_samples(images, labels, nn::preset("h-cnn", 1, 10), InterpMode::Bilinear);
    CHECK(hex.inputs.shape() == nn::Shape4{2, 34, 30, 1});
    CHECK(hex.labels == labels);
    CHECK(hex.inputs.data().head(34 * 30).isApproxToConstant(1.0));
    CHECK(hex.inputs.data().tail(34 * 30).isZero());
    const auto sq = to_samples(images, labels, nn::preset("s-cnn", 1, 10), InterpMode::Bilinear);
    CHECK(sq.inputs.shape() == nn::Shape4{2, 32, 32, 1});
    CHECK(is_hexagonal(nn::preset("h-cnn")));
    CHECK_FALSE(is_hexagonal(nn::preset("s-cnn")));
}
