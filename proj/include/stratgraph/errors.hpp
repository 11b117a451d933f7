#pragma once

#include <stdexcept>
#include <string>

namespace stratgraph {

// File could not be read/written.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File exists but its contents violate the format contract.
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A response was requested for a node with zero self-weight.
struct node_immobile_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Projection is undefined for a zero parameter vector.
struct degenerate_classifier_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss.
struct training_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal guarantee was broken; indicates a bug, not bad input.
struct invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace stratgraph
