#ifndef QNET_VERSION_HPP
#define QNET_VERSION_HPP

#define QNET_VERSION "0.1.0"
#define QNET_CSV_FORMAT_VERSION 1

#endif
