#include <cstdio>

#include "dlab/field.hpp"

int main() {
    std::puts("divisorlab cli placeholder");
    return 0;
}
