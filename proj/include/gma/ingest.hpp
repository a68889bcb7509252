#ifndef GMA_INGEST_HPP
#define GMA_INGEST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gma/gmaiou.hpp"
#include "gma/mask.hpp"

namespace gma {

/// Strict subset of the COCO instances schema:
///   images:      [{id, width, height}]
///   annotations: [{id, image_id, category_id, iscrowd,
///                  segmentation: [[x1,y1,...]], bbox: [x,y,w,h]}]
/// Crowd/RLE segmentations are skipped with a counted warning.
struct Annotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  int category_id = 0;
  std::vector<Polygon> parts;
  FloatBox stored_bbox;  // as annotated; superseded by the recomputed box
};

struct ImageInfo {
  std::int64_t id = 0;
  int width = 0;
  int height = 0;
};

struct AnnotationFile {
  std::vector<ImageInfo> images;
  std::vector<Annotation> annotations;  // ordered by annotation id
  std::uint64_t skipped_crowd = 0;
  std::uint64_t skipped_rle = 0;
  std::uint64_t skipped_empty = 0;  // zero-area masks, counted at rasterize

  const ImageInfo* find_image(std::int64_t id) const;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AnnotationFile load_annotations(const std::string& path);
AnnotationFile parse_annotations(const std::string& json_text);

/// Rasterizes every annotation of one image at image resolution. Tight
/// boxes are recomputed from the masks; zero-area masks are dropped and
/// counted on the file.
std::vector<GroundTruth> to_ground_truths(AnnotationFile& file,
                                          std::int64_t image_id);

}  // namespace gma

#endif
