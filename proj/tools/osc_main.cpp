#include "cli.hpp"

int main(int argc, char** argv)
{
    return osc::cli::run(argc, argv);
}
