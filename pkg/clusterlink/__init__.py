"""
ClusterLink - cooperative IoT uplink performance toolkit
"""
