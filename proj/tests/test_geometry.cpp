#include <doctest.h>

#include <filesystem>

#include "oracles.hpp"
#include "vismvs/camera.hpp"
#include "vismvs/features.hpp"
#include "vismvs/hypotheses.hpp"
#include "vismvs/warp.hpp"

using namespace vismvs;

namespace {

CameraModel identity_camera(int w, int h, double f, double cx, double cy) {
    CameraModel cam;
    cam.intrinsics << f, 0, cx, 0, f, cy, 0, 0, 1;
    cam.width = w;
    cam.height = h;
    return cam;
}

FeatureMap map_from_image(const ImageF& img) {
    FeatureMap fm(img.width(), img.height(), 1);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            fm.at(x, y, 0) = img(x, y);
    return fm;
}

} // namespace

TEST_CASE("project on the optical axis") {
    CameraModel cam = identity_camera(10, 10, 1.0, 0.0, 0.0);
    const Projection p = project(cam, Eigen::Vector3d(0, 0, 5));
    CHECK(p.pixel.x() == doctest::Approx(0.0));
    CHECK(p.pixel.y() == doctest::Approx(0.0));
    CHECK(p.depth == doctest::Approx(5.0));
}

TEST_CASE("project with focal length and principal point") {
    CameraModel cam = identity_camera(200, 100, 100.0, 50.0, 50.0);
    const Projection p = project(cam, Eigen::Vector3d(1, 0, 2));
    CHECK(p.pixel.x() == doctest::Approx(100.0)); // 100 * (1/2) + 50
    CHECK(p.pixel.y() == doctest::Approx(50.0));
    CHECK(p.depth == doctest::Approx(2.0));
}

TEST_CASE("project rejects points behind the camera") {
    CameraModel cam = identity_camera(10, 10, 1.0, 0.0, 0.0);
    CHECK_THROWS_AS(project(cam, Eigen::Vector3d(0, 0, -1)), std::domain_error);
}

TEST_CASE("backproject inverts the hand-computed projection") {
    CameraModel cam = identity_camera(200, 100, 100.0, 50.0, 50.0);
    const Eigen::Vector3d world = backproject(cam, Eigen::Vector2d(100, 50), 2.0);
    CHECK(world.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(world.y() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(world.z() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("backproject rejects non-positive depth") {
    CameraModel cam = identity_camera(10, 10, 1.0, 0.0, 0.0);
    CHECK_THROWS_AS(backproject(cam, Eigen::Vector2d(0, 0), 0.0), std::domain_error);
}

TEST_CASE("project/backproject round trip on random cameras") {
    auto g = oracle::rng(7001);
    for (int it = 0; it < 200; ++it) {
        const CameraModel cam = oracle::random_camera(g);
        const Eigen::Vector2d pixel(oracle::uniform(g, 0, cam.width - 1),
                                    oracle::uniform(g, 0, cam.height - 1));
        const double depth = oracle::uniform(g, 0.2, 50.0);
        const Eigen::Vector3d world = backproject(cam, pixel, depth);
        const Projection p = project(cam, world);
        CHECK(std::abs(p.pixel.x() - pixel.x()) < 1e-9);
        CHECK(std::abs(p.pixel.y() - pixel.y()) < 1e-9);
        CHECK(std::abs(p.depth - depth) < 1e-9);
    }
}

TEST_CASE("camera validation catches malformed models") {
    CameraModel cam = identity_camera(10, 10, 1.0, 0.0, 0.0);
    CHECK_NOTHROW(cam.validate());

    CameraModel bad_k = cam;
    bad_k.intrinsics(1, 0) = 0.3;
    CHECK_THROWS_AS(bad_k.validate(), std::invalid_argument);

    CameraModel bad_r = cam;
    bad_r.rotation(0, 1) = 0.5;
    CHECK_THROWS_AS(bad_r.validate(), std::invalid_argument);

    CameraModel bad_dims = cam;
    bad_dims.width = 0;
    CHECK_THROWS_AS(bad_dims.validate(), std::invalid_argument);
}

TEST_CASE("identity warp reproduces the source map") {
    auto g = oracle::rng(7002);
    const int w = 24, h = 18;
    ImageF img(w, h);
    for (std::size_t i = 0; i < img.size(); ++i)
        img[i] = static_cast<float>(oracle::uniform(g, 0, 1));
    FeatureMap fm = map_from_image(img);
    CameraModel cam = identity_camera(w, h, 30.0, (w - 1) / 2.0, (h - 1) / 2.0);

    const WarpedFeatures out = warp_to_reference(fm, cam, cam, 3.7);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            CHECK(out.mask(x, y) == 1);
            CHECK(std::abs(out.features.at(x, y, 0) - img(x, y)) < 1e-5);
        }
    }
}

TEST_CASE("translation rig shifts a fronto-parallel plane by f*b/d") {
    // A linear ramp interpolates exactly under bilinear sampling, so the
    // recovered displacement isolates the warp geometry.
    const int w = 64, h = 32;
    const double f = 75.0, baseline = 0.4, depth = 2.5;
    CameraModel ref = identity_camera(w, h, f, (w - 1) / 2.0, (h - 1) / 2.0);
    // Source camera displaced by +baseline along x: a plane point maps to
    // u_src = f (X - b)/d + cx = u_ref - f b / d.
    CameraModel src = ref;
    src.translation = Eigen::Vector3d(-baseline, 0, 0);

    ImageF ramp(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) ramp(x, y) = static_cast<float>(x);
    FeatureMap fm = map_from_image(ramp);

    const double disparity = f * baseline / depth;
    const WarpedFeatures out = warp_to_reference(fm, ref, src, depth);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!out.mask(x, y)) continue;
            const double measured = x - out.features.at(x, y, 0);
            CHECK(std::abs(measured - disparity) < 1e-3);
        }
    }

    // And against a directly shifted map on a textured image.
    auto g = oracle::rng(7003);
    ImageF tex(w, h);
    for (std::size_t i = 0; i < tex.size(); ++i)
        tex[i] = static_cast<float>(oracle::uniform(g, 0, 1));
    const WarpedFeatures warped = warp_to_reference(map_from_image(tex), ref, src, depth);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!warped.mask(x, y)) continue;
            const double direct = oracle::bilinear(tex, x - disparity, y);
            CHECK(std::abs(warped.features.at(x, y, 0) - direct) < 1e-5);
        }
    }
}

TEST_CASE("warp mask is exactly the in-bounds predicate") {
    auto g = oracle::rng(7004);
    for (int it = 0; it < 20; ++it) {
        const CameraModel ref = oracle::random_camera(g, 32, 24);
        CameraModel src = oracle::random_camera(g, 32, 24);
        // Keep the rig loosely convergent so some pixels land in bounds.
        src.rotation = ref.rotation;
        src.translation = ref.translation + Eigen::Vector3d(oracle::uniform(g, -0.5, 0.5),
                                                            oracle::uniform(g, -0.5, 0.5),
                                                            oracle::uniform(g, -0.2, 0.2));
        const double depth = oracle::uniform(g, 1.0, 10.0);
        FeatureMap fm(32, 24, 1);
        const WarpedFeatures out = warp_to_reference(fm, ref, src, depth);
        for (int y = 0; y < 24; ++y) {
            for (int x = 0; x < 32; ++x) {
                const Eigen::Vector3d world = backproject(ref, Eigen::Vector2d(x, y), depth);
                Projection p;
                bool inside = try_project(src, world, p);
                if (inside)
                    inside = p.pixel.x() >= 0.0 && p.pixel.x() <= src.width - 1 &&
                             p.pixel.y() >= 0.0 && p.pixel.y() <= src.height - 1;
                CHECK(static_cast<bool>(out.mask(x, y)) == inside);
            }
        }
    }
}

TEST_CASE("warp with all projections out of bounds") {
    const int w = 16, h = 16;
    CameraModel ref = identity_camera(w, h, 20.0, (w - 1) / 2.0, (h - 1) / 2.0);
    CameraModel src = ref;
    // Source shifted so far sideways that a very near plane exits its image.
    src.translation = Eigen::Vector3d(-50.0, 0, 0);
    FeatureMap fm(w, h, 2);
    for (std::size_t i = 0; i < fm.data().size(); ++i) fm.data()[i] = 1.0f;
    const WarpedFeatures out = warp_to_reference(fm, ref, src, 0.05);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            CHECK(out.mask(x, y) == 0);
            CHECK(out.features.at(x, y, 0) == 0.0f);
            CHECK(out.features.at(x, y, 1) == 0.0f);
        }
    }
}

TEST_CASE("warp rejects mismatched camera dimensions") {
    CameraModel ref = identity_camera(16, 16, 20.0, 7.5, 7.5);
    CameraModel src = identity_camera(8, 8, 20.0, 3.5, 3.5);
    FeatureMap fm(16, 16, 1);
    CHECK_THROWS_AS(warp_to_reference(fm, ref, src, 1.0), std::invalid_argument);
}

TEST_CASE("uniform hypotheses cover the half-open range") {
    SUBCASE("DTU-style range") {
        const DepthHypotheses h = uniform_hypotheses(425.0, 240.0, 32);
        CHECK(h.count() == 32);
        CHECK(h.value(0) == doctest::Approx(425.0));
        CHECK(h.value(1) - h.value(0) == doctest::Approx(15.0));
        CHECK(h.value(31) == doctest::Approx(890.0));
    }
    SUBCASE("two samples") {
        const DepthHypotheses h = uniform_hypotheses(1.0, 0.5, 2);
        CHECK(h.value(0) == doctest::Approx(1.0));
        CHECK(h.value(1) == doctest::Approx(1.5));
    }
    SUBCASE("four samples") {
        const DepthHypotheses h = uniform_hypotheses(1.0, 1.0, 4);
        CHECK(h.value(0) == doctest::Approx(1.0));
        CHECK(h.value(1) == doctest::Approx(1.5));
        CHECK(h.value(2) == doctest::Approx(2.0));
        CHECK(h.value(3) == doctest::Approx(2.5));
    }
    SUBCASE("count below two is rejected") {
        CHECK_THROWS_AS(uniform_hypotheses(1.0, 1.0, 1), std::invalid_argument);
    }
}

TEST_CASE("camera file round trip and pose convention flag") {
    auto g = oracle::rng(7005);
    const CameraModel cam = oracle::random_camera(g);
    const auto path = std::filesystem::temp_directory_path() / "vismvs_cam_test.txt";
    save_camera(path, cam);

    const CameraModel loaded = load_camera(path);
    CHECK((loaded.rotation - cam.rotation).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((loaded.translation - cam.translation).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((loaded.intrinsics - cam.intrinsics).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(loaded.width == cam.width);

    // A camera-to-world file holds the inverse pose of the same camera.
    CameraModel inverse = cam;
    inverse.rotation = cam.rotation.transpose();
    inverse.translation = cam.center();
    save_camera(path, inverse);
    const CameraModel back = load_camera(path, /*camera_to_world=*/true);
    CHECK((back.rotation - cam.rotation).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((back.translation - cam.translation).cwiseAbs().maxCoeff() < 1e-9);
    std::filesystem::remove(path);
}
