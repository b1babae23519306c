#pragma once

// Published admissible orders for the types (2,1) and (3), in the order they
// are listed there (not sorted).

#include <vector>

namespace listed {

inline const std::vector<std::vector<int>> kTwoOne = {
    {0, 1, 2, 3, 4, 5, 6, 7}, {0, 1, 2, 3, 4, 6, 5, 7}, {0, 1, 2, 4, 3, 5, 6, 7}, {0, 1, 2, 4, 3, 6, 5, 7},
    {0, 4, 2, 6, 1, 5, 3, 7}, {0, 1, 2, 4, 6, 3, 5, 7}, {0, 1, 4, 2, 5, 3, 6, 7}, {0, 1, 4, 2, 5, 6, 3, 7},
    {0, 1, 4, 2, 6, 5, 3, 7}, {0, 4, 1, 5, 2, 6, 3, 7}, {0, 1, 4, 5, 2, 3, 6, 7}, {0, 1, 4, 5, 2, 6, 3, 7},
    {0, 2, 1, 3, 4, 6, 5, 7}, {0, 2, 1, 4, 3, 6, 5, 7}, {0, 4, 2, 1, 6, 5, 3, 7}, {0, 2, 1, 4, 6, 3, 5, 7},
    {0, 2, 4, 1, 6, 3, 5, 7}, {0, 2, 4, 6, 1, 3, 5, 7}, {0, 4, 1, 2, 5, 6, 3, 7}, {0, 4, 1, 2, 6, 5, 3, 7},
};

inline const std::vector<std::vector<int>> kThree = {
    {0, 1, 2, 3, 4, 5, 6, 7}, {0, 1, 2, 4, 3, 5, 6, 7}, {0, 1, 4, 2, 5, 3, 6, 7}, {0, 1, 4, 5, 2, 3, 6, 7},
    {0, 2, 1, 3, 4, 6, 5, 7}, {0, 2, 1, 4, 3, 6, 5, 7}, {0, 2, 4, 1, 6, 3, 5, 7}, {0, 2, 4, 6, 1, 3, 5, 7},
    {0, 4, 1, 2, 5, 6, 3, 7}, {0, 4, 1, 5, 2, 6, 3, 7}, {0, 4, 2, 1, 6, 5, 3, 7}, {0, 4, 2, 6, 1, 5, 3, 7},
};

}  // namespace listed
