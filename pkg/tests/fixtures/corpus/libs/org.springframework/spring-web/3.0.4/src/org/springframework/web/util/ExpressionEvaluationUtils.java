package org.springframework.web.util;

import javax.servlet.jsp.JspException;
import javax.servlet.jsp.PageContext;
import org.apache.commons.logging.Log;
import org.apache.commons.logging.LogFactory;

public abstract class ExpressionEvaluationUtils {

    public static final String EXPRESSION_PREFIX = "${";

    private static final Log logger = LogFactory.getLog(ExpressionEvaluationUtils.class);

    public static boolean isExpressionLanguage(String value) {
        return (value != null && value.indexOf(EXPRESSION_PREFIX) != -1);
    }

    public static Object evaluate(String attrName, String attrValue, Class resultClass, PageContext pageContext)
            throws JspException {
        return isExpressionLanguage(attrValue) ? doEvaluate(attrName, attrValue, resultClass, pageContext) : attrValue;
    }

    public static String evaluateString(String attrName, String attrValue, PageContext pageContext)
            throws JspException {
        if (isExpressionLanguage(attrValue)) {
            return (String) doEvaluate(attrName, attrValue, String.class, pageContext);
        }
        return attrValue;
    }

    private static Object doEvaluate(String attrName, String attrValue, Class resultClass, PageContext pageContext)
            throws JspException {
        try {
            return pageContext.getExpressionEvaluator().evaluate(attrValue, resultClass, pageContext.getVariableResolver(), null);
        } catch (Exception ex) {
            throw new JspException("Parsing of JSP EL expression \"" + attrValue + "\" failed", ex);
        }
    }
}
