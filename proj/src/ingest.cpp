#include "gma/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gma {

using nlohmann::json;

const ImageInfo* AnnotationFile::find_image(std::int64_t id) const {
  for (const auto& im : images)
    if (im.id == id) return &im;
  return nullptr;
}

namespace {

Polygon parse_ring(const json& flat, std::int64_t ann_id) {
  if (!flat.is_array() || flat.size() < 6 || flat.size() % 2 != 0) {
    throw IngestError("annotation " + std::to_string(ann_id) +
                      ": polygon ring needs an even list of >= 6 numbers");
  }
  Polygon poly;
  for (std::size_t i = 0; i < flat.size(); i += 2) {
    poly.vertices.push_back(
        {flat[i].get<double>(), flat[i + 1].get<double>()});
  }
  return poly;
}

template <typename T>
T require(const json& obj, const char* field, const char* where) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw IngestError(std::string(where) + ": missing field '" + field + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw IngestError(std::string(where) + ": field '" + field +
                      "' has the wrong type");
  }
}

}  // namespace

AnnotationFile parse_annotations(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw IngestError("malformed JSON at byte " + std::to_string(e.byte) +
                      ": " + e.what());
  }
  if (!root.is_object() || !root.contains("images") ||
      !root.contains("annotations"))
    throw IngestError("expected an object with 'images' and 'annotations'");

  AnnotationFile file;
  for (const auto& im : root["images"]) {
    ImageInfo info;
    info.id = require<std::int64_t>(im, "id", "images");
    info.width = require<int>(im, "width", "images");
    info.height = require<int>(im, "height", "images");
    if (info.width < 1 || info.height < 1)
      throw IngestError("image " + std::to_string(info.id) +
                        ": non-positive dimensions");
    file.images.push_back(info);
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> dangling;
  for (const auto& an : root["annotations"]) {
    Annotation a;
    a.id = require<std::int64_t>(an, "id", "annotations");
    a.image_id = require<std::int64_t>(an, "image_id", "annotations");
    a.category_id = an.value("category_id", 0);
    if (!file.find_image(a.image_id)) {
      dangling.emplace_back(a.id, a.image_id);
      continue;
    }
    if (an.value("iscrowd", 0) != 0) {
      ++file.skipped_crowd;
      continue;
    }
    const auto seg = an.find("segmentation");
    if (seg == an.end() || !seg->is_array()) {
      ++file.skipped_rle;  // RLE objects and anything non-polygonal
      continue;
    }
    for (const auto& ring : *seg) a.parts.push_back(parse_ring(ring, a.id));
    if (an.contains("bbox") && an["bbox"].is_array() &&
        an["bbox"].size() == 4) {
      const double x = an["bbox"][0].get<double>();
      const double y = an["bbox"][1].get<double>();
      const double w = an["bbox"][2].get<double>();
      const double h = an["bbox"][3].get<double>();
      a.stored_bbox = FloatBox{x, y, x + w, y + h};
    }
    file.annotations.push_back(std::move(a));
  }
  if (!dangling.empty()) {
    std::ostringstream os;
    os << "annotations reference unknown image ids:";
    for (const auto& [ann, img] : dangling)
      os << " annotation " << ann << " -> image " << img;
    throw IngestError(os.str());
  }
  // annotation array order must not matter downstream
  std::sort(file.annotations.begin(), file.annotations.end(),
            [](const Annotation& a, const Annotation& b) {
              return a.id < b.id;
            });
  return file;
}

AnnotationFile load_annotations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open annotation file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations(buf.str());
}

std::vector<GroundTruth> to_ground_truths(AnnotationFile& file,
                                          std::int64_t image_id) {
  const ImageInfo* im = file.find_image(image_id);
  if (!im)
    throw IngestError("unknown image id: " + std::to_string(image_id));
  std::vector<GroundTruth> gts;
  for (const auto& a : file.annotations) {
    if (a.image_id != image_id) continue;
    RasterMask mask = rasterize(a.parts, im->width, im->height);
    if (mask.pixel_count() == 0) {
      ++file.skipped_empty;
      continue;
    }
    gts.push_back(make_ground_truth(std::move(mask), a.category_id));
  }
  return gts;
}

}  // namespace gma
