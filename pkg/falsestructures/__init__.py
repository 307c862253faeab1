"""False structures laboratory"""
