// Taxonomy store, concept subsumption and the service matcher.
//
// A taxonomy is split across documents: one core document every node holds,
// plus extension documents that ground their top concepts in the core (or in
// another extension along the base chain). Matching a request against a
// cached entry may therefore be undecidable locally; the matcher reports
// which document URIs are missing so the caller can fetch them.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "handy/types.hpp"

namespace handy {

// Text form of one document:
//   name: Display Name
//   uri: tax://something
//   base: tax://parent-document     (absent or empty for the core)
//   author: who
//   child.concept -> parent.concept
// Blank lines and '#' comments are ignored.
OntologyDocument parseTaxonomy(const std::string& text, const std::string& origin);
std::string formatTaxonomy(const OntologyDocument& doc);
OntologyDocument loadTaxonomyFile(const std::string& path);

class OntologyStore {
  public:
    // Merges the document's edges. A concept keeps its first recorded
    // parent if two documents disagree. Loading the same URI twice is a
    // no-op. Returns true when the document was new.
    bool loadDocument(const OntologyDocument& doc);

    bool hasDocument(const std::string& uri) const;
    const OntologyDocument* document(const std::string& uri) const;

    bool knowsConcept(const std::string& concept_id) const;

    // True iff `descendant` equals `ancestor` or reaches it walking up
    // parent links.
    bool subsumes(const std::string& ancestor, const std::string& descendant) const;

    // Loaded child -> parent tuples; drives the inference delay model.
    size_t conceptCount() const { return edge_count_; }
    size_t documentCount() const { return docs_.size(); }
    std::vector<std::string> loadedUris() const;

  private:
    std::map<std::string, OntologyDocument> docs_;
    std::map<std::string, std::string> parent_;
    std::set<std::string> known_;
    size_t edge_count_ = 0;
};

struct MatchDecision {
    enum class Kind { Match, NeedOntology, NoMatch };
    Kind kind = Kind::NoMatch;
    const ServiceTableEntry* entry = nullptr;   // set on Match
    std::vector<std::string> missing_uris;      // set on NeedOntology, deduped
};

// A candidate matches when its offer satisfies every requested QoS bound and
// its description fits: by exact name when the request names the service, or
// by the requested concept subsuming the offered one. A concept comparison
// that the store cannot resolve yet turns into NeedOntology naming the
// candidate's missing documents, unless some other candidate matches
// outright. Candidates are scanned in the given order; the first match wins.
MatchDecision matchService(const OntologyStore& store,
                           const std::vector<const ServiceTableEntry*>& candidates,
                           const ServiceDescription& wanted, const QoSSpec& qos);

}  // namespace handy
