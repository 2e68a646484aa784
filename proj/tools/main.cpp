#include "ncqp/cli.hpp"

int main(int argc, char** argv)
{
    return ncqp::cli::run(argc, argv);
}
