#include <benchmark/benchmark.h>
int main_placeholder;
