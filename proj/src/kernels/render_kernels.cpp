#include "avos/kernels/render_kernels.hpp"

#include <algorithm>
#include <limits>

namespace avos::kernels {
namespace {

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  int object = -1;
};

// Nearest box along the unit ray; earlier objects win exact ties.
Hit nearest_hit(const RenderJob& job, Vec3 origin, Vec3 dir) {
  Hit best;
  const auto& objects = job.scene->objects;
  for (int idx : job.candidates) {
    auto t = ray_box_entry(origin, dir, objects[static_cast<size_t>(idx)].box);
    if (t && *t < best.t) {
      best.t = *t;
      best.object = idx;
    }
  }
  if (best.t > job.camera.max_range) best = Hit{};
  return best;
}

uint8_t shade(uint8_t c, double f) { return static_cast<uint8_t>(std::clamp(c * f, 0.0, 255.0)); }

void render_row(const RenderJob& job, const Mat3& cam_to_world, int v, sensor::Observation& out) {
  const Vec3 origin = job.pose.position;
  for (int u = 0; u < job.camera.width; ++u) {
    const size_t px = out.at(u, v);
    const Vec3 dir = normalized(cam_to_world * job.camera.unproject_unit_z(u, v));
    const Hit hit = nearest_hit(job, origin, dir);
    uint8_t* rgb = &out.color[px * 3];
    if (hit.object < 0) {
      out.depth[px] = 0.0;
      out.semantic_ids[px] = 0;
      const bool ground = dir.z < 0.0;
      rgb[0] = ground ? 95 : 150;
      rgb[1] = ground ? 105 : 190;
      rgb[2] = ground ? 90 : 235;
      continue;
    }
    const auto& obj = job.scene->objects[static_cast<size_t>(hit.object)];
    out.depth[px] = hit.t;
    out.semantic_ids[px] = static_cast<uint16_t>(obj.object_id);
    // Flat shading by the axis of the face that was hit.
    const Vec3 p = origin + dir * hit.t;
    double best = std::numeric_limits<double>::infinity();
    int axis = 0;
    for (int a = 0; a < 3; ++a) {
      const double d = std::min(std::abs(p[a] - obj.box.min[a]), std::abs(p[a] - obj.box.max[a]));
      if (d < best) {
        best = d;
        axis = a;
      }
    }
    const double f = axis == 2 ? 1.0 : (axis == 0 ? 0.85 : 0.7);
    for (int ch = 0; ch < 3; ++ch) rgb[ch] = shade(obj.display_color[static_cast<size_t>(ch)], f);
  }
}

void prepare(const RenderJob& job, sensor::Observation& out) {
  out.width = job.camera.width;
  out.height = job.camera.height;
  out.color.assign(out.pixel_count() * 3, 0);
  out.depth.assign(out.pixel_count(), 0.0);
  out.semantic_ids.assign(out.pixel_count(), 0);
  out.pose = job.pose;
}

}  // namespace

RenderJob make_render_job(const world::Scene& scene, const sensor::Pose& pose,
                          const sensor::CameraModel& camera) {
  RenderJob job;
  job.scene = &scene;
  job.camera = camera;
  job.pose = pose;
  for (size_t n = 0; n < scene.objects.size(); ++n)
    if (scene.objects[n].box.distance_to(pose.position) <= camera.max_range)
      job.candidates.push_back(static_cast<int>(n));
  return job;
}

void render_serial(const RenderJob& job, sensor::Observation& out) {
  prepare(job, out);
  const Mat3 cam_to_world = job.pose.rotation().transposed();
  for (int v = 0; v < job.camera.height; ++v) render_row(job, cam_to_world, v, out);
}

void render_parallel(const RenderJob& job, sensor::Observation& out) {
  prepare(job, out);
  const Mat3 cam_to_world = job.pose.rotation().transposed();
  const int height = job.camera.height;
#pragma omp parallel for schedule(static)
  for (int v = 0; v < height; ++v) render_row(job, cam_to_world, v, out);
}

}  // namespace avos::kernels
