#ifndef NETREC_MODEL_HPP
#define NETREC_MODEL_HPP

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "netrec/dataset.hpp"
#include "netrec/j48.hpp"
#include "netrec/naive_bayes.hpp"

namespace netrec {

using AnyModel = std::variant<TreeModel, BayesModel>;

std::vector<double> predict_distribution(const AnyModel& model, const Instance& instance);
const Schema& model_schema(const AnyModel& model);
std::string model_kind(const AnyModel& model);  // "j48" or "naive_bayes"

/// Versioned JSON persistence. Doubles round-trip exactly, so a reloaded
/// model predicts identically.
void save_model(const AnyModel& model, std::ostream& sink);
AnyModel load_model(std::istream& source);

/// Re-expresses instances from `source` in the `target` (training) schema:
/// attributes are matched by name, nominal values re-mapped by value name
/// (values unseen in training become missing), and the class cell is left
/// missing. Construction throws with the missing/extra attribute lists when
/// the schemas are incompatible.
class SchemaAligner {
public:
    SchemaAligner(const Schema& target, const Schema& source);

    Instance align(const Instance& instance) const;
    bool identity() const { return identity_; }

private:
    const Schema* target_;
    const Schema* source_;
    bool identity_ = false;
    // per target attribute: index into the source schema (class -> npos)
    std::vector<std::size_t> source_index_;
    // per target nominal attribute: source category -> target category (npos = unseen)
    std::vector<std::vector<std::size_t>> category_remap_;
};

void check_compatible(const Schema& target, const Schema& source);
Instance align_instance(const Schema& target, const Schema& source, const Instance& instance);

}  // namespace netrec

#endif
