// Built-in taxonomy: one core document every node preloads, plus extension
// documents that ground their top concepts directly in core concepts.
// Extensions never reference other extensions; keeping that invariant makes
// an unresolved concept comparison always attributable to the entry's own
// missing documents.
#pragma once

#include <string>
#include <vector>

#include "handy/types.hpp"

namespace handy {

inline constexpr const char* kCoreTaxonomyUri = "tax://core";

// Concept marking a taxonomy document offered as a fetchable service; the
// document's uri doubles as the service name.
inline constexpr const char* kOntologyConceptId = "core.ontology_document";

OntologyDocument coreTaxonomy();
std::vector<OntologyDocument> extensionTaxonomies();

}  // namespace handy
