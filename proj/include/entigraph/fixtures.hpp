#pragma once

// Small reference corpus: two documents, four mentions, three entities.

#include <string_view>

#include "entigraph/io.hpp"

namespace entigraph::fixtures {

inline constexpr std::string_view kG0Json = R"({
  "version": 1,
  "documents": [
    {"id": "d1", "title": "Doc One", "sentences": [[0, 40], [40, 80]]},
    {"id": "d2", "title": "Doc Two", "sentences": [[0, 50]]}
  ],
  "mentions": [
    {"id": "m1", "document": "d1", "start": 0, "end": 5, "surface": "Tesla", "class": "PER"},
    {"id": "m2", "document": "d1", "start": 10, "end": 16, "surface": "Berlin", "class": "LOC"},
    {"id": "m3", "document": "d1", "start": 45, "end": 50, "surface": "Tesla", "class": "PER"},
    {"id": "m4", "document": "d2", "start": 3, "end": 9, "surface": "Edison", "class": "PER"}
  ],
  "entities": [
    {"id": "e1", "term": "Nikola Tesla", "class": "PER"},
    {"id": "e2", "term": "Berlin", "class": "LOC"},
    {"id": "e3", "term": "Thomas Edison", "class": "PER"}
  ],
  "links": [
    {"mention": "m1", "entity": "e1", "confidence": 0.9},
    {"mention": "m3", "entity": "e1", "confidence": 0.7},
    {"mention": "m2", "entity": "e2", "confidence": 0.95},
    {"mention": "m4", "entity": "e3", "confidence": 0.8},
    {"mention": "m1", "entity": "e3", "confidence": 0.2}
  ]
}
)";

inline ImportFile g0() { return parse_import(kG0Json); }

}  // namespace entigraph::fixtures
